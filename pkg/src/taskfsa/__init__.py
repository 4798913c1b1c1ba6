"""taskfsa: compile natural-language task instructions into finite-state
controllers, verify them against user models and LTL specifications, and
refine them from counterexamples."""

__version__ = "0.1.0"
