// Client-side view state: which iteration is selected and where the
// counterexample playback cursor stands. Pure logic, no DOM here.

import {
  CounterexamplePayload,
  IterationInfo,
  SessionState,
  TraceEntry,
  isSettled,
} from './api'

export interface PlaybackStep extends TraceEntry {
  inLoop: boolean
}

export class SessionView {
  state: SessionState | null = null
  selectedIteration = 0 // 1-based; 0 = none
  playbackIndex = -1 // -1 = not playing

  loadState(state: SessionState): void {
    const revisionChanged = !this.state || state.revision !== this.state.revision
    this.state = state
    const count = state.iterations?.length ?? 0
    if (revisionChanged || this.selectedIteration > count || this.selectedIteration === 0) {
      this.selectedIteration = count
      this.playbackIndex = -1
    }
  }

  selectIteration(index: number): void {
    const count = this.state?.iterations?.length ?? 0
    if (index >= 1 && index <= count) {
      this.selectedIteration = index
      this.playbackIndex = -1
    }
  }

  iteration(): IterationInfo | null {
    if (!this.state?.iterations || this.selectedIteration === 0) return null
    return this.state.iterations[this.selectedIteration - 1] ?? null
  }

  iterationPassed(): boolean {
    const it = this.iteration()
    return !!it && it.results.every((r) => r.passed)
  }

  counterexample(): CounterexamplePayload | null {
    const it = this.iteration()
    if (!it) return null
    for (const result of it.results) {
      if (!result.passed && result.counterexample) return result.counterexample
    }
    return null
  }

  playbackSteps(): PlaybackStep[] {
    const cex = this.counterexample()
    if (!cex) return []
    return [
      ...cex.stem.map((s) => ({ ...s, inLoop: false })),
      ...cex.loop.map((s) => ({ ...s, inLoop: true })),
    ]
  }

  canPlay(): boolean {
    return this.playbackSteps().length > 0
  }

  startPlayback(): void {
    if (this.canPlay()) this.playbackIndex = 0
  }

  // Advance one step; past the end the cursor wraps back to the first
  // loop entry, mirroring the lasso semantics.
  stepPlayback(): void {
    const steps = this.playbackSteps()
    if (!steps.length || this.playbackIndex < 0) return
    let next = this.playbackIndex + 1
    if (next >= steps.length) {
      next = steps.findIndex((s) => s.inLoop)
      if (next < 0) next = 0
    }
    this.playbackIndex = next
  }

  stopPlayback(): void {
    this.playbackIndex = -1
  }

  currentStep(): PlaybackStep | null {
    const steps = this.playbackSteps()
    if (this.playbackIndex < 0 || this.playbackIndex >= steps.length) return null
    return steps[this.playbackIndex]
  }

  busy(): boolean {
    return !!this.state && !isSettled(this.state.status)
  }

  canSubmit(): boolean {
    return !!this.state && this.state.status === 'fail'
  }

  canPrune(): boolean {
    return !!this.state && this.state.status === 'pass'
  }

  latestControllerDot(): string | null {
    const iterations = this.state?.iterations
    if (!iterations || this.selectedIteration === 0) return null
    return iterations[this.selectedIteration - 1]?.dot.controller ?? null
  }

  projectionText(): string {
    const cex = this.counterexample()
    if (!cex) return ''
    const stem = cex.projection.stem.join(' -> ')
    const loop = cex.projection.loop.join(' -> ')
    return stem ? `${stem} -> [loop ${loop}]` : `[loop ${loop}]`
  }
}
