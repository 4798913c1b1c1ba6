import { describe, expect, it } from 'vitest'
import { SessionState } from '../src/api'
import { SessionView } from '../src/view'

function failState(): SessionState {
  return {
    id: 's1',
    status: 'fail',
    revision: 2,
    error: null,
    task: 'demo',
    iterations: [
      {
        index: 1,
        kind: 'initial',
        prompt: null,
        steps: [],
        results: [
          {
            name: 'spec',
            passed: false,
            counterexample: {
              stem: [
                { model: 'p0', controller: 'q1', label: ['a'] },
                { model: 'p0', controller: 'q2', label: [] },
              ],
              loop: [{ model: 'p0', controller: 'q4', label: [] }],
              projection: { stem: [], loop: ['p0'] },
            },
          },
        ],
        dot: { controller: '/sessions/s1/dot/controller-1' },
      },
    ],
    dot: { controller: '/sessions/s1/dot/controller', model: '/sessions/s1/dot/model' },
  }
}

describe('SessionView', () => {
  it('selects the latest iteration on load and resets playback', () => {
    const view = new SessionView()
    view.loadState(failState())
    expect(view.selectedIteration).toBe(1)
    expect(view.playbackIndex).toBe(-1)
  })

  it('steps through the stem and wraps inside the loop', () => {
    const view = new SessionView()
    view.loadState(failState())
    view.startPlayback()
    const seen: string[] = []
    for (let i = 0; i < 5; i++) {
      const step = view.currentStep()!
      seen.push(`${step.model}/${step.controller}${step.inLoop ? '*' : ''}`)
      view.stepPlayback()
    }
    expect(seen).toEqual(['p0/q1', 'p0/q2', 'p0/q4*', 'p0/q4*', 'p0/q4*'])
  })

  it('renders the collapsed projection text', () => {
    const view = new SessionView()
    view.loadState(failState())
    expect(view.projectionText()).toBe('[loop p0]')
  })

  it('disables playback and submission on a pass', () => {
    const view = new SessionView()
    const state = failState()
    state.status = 'pass'
    state.iterations![0].results[0] = { name: 'spec', passed: true, counterexample: null }
    view.loadState(state)
    expect(view.canPlay()).toBe(false)
    expect(view.canSubmit()).toBe(false)
    expect(view.canPrune()).toBe(true)
  })

  it('disables submission while the service is busy', () => {
    const view = new SessionView()
    const state = failState()
    state.status = 'querying'
    view.loadState(state)
    expect(view.busy()).toBe(true)
    expect(view.canSubmit()).toBe(false)
  })
})
