// Contract tests over recorded API responses: the console displays the
// crossing session, plays the p0-loop counterexample, submits the two
// refinement instructions and renders the PASS badge on the final
// revision. The rendered graphs are cross-checked against the served DOT
// artifacts, and all state changes round-trip through the (replayed) API.

import { beforeEach, describe, expect, it } from 'vitest'
import { ApiClient } from '../src/api'
import { Console, consoleElements } from '../src/app'
import { parseDot } from '../src/dot'
import { mountConsoleDom, recordedBody, replayFetch } from './helpers'

const INSTRUCTION_1 = 'with an action "approach pedestrian crossing"'
const INSTRUCTION_2 =
  'Refine the following steps to ensure the action "cross the road" is performed ' +
  'under conditions "traffic light turns green" and "no cars are coming"'

function makeConsole() {
  mountConsoleDom()
  const { fetch, calls } = replayFetch()
  const api = new ApiClient('', fetch)
  const app = new Console(api, 's1', consoleElements(document))
  return { app, calls }
}

function renderedGraph(containerId: string) {
  const svg = document.querySelector(`#${containerId} svg.graph`)!
  expect(svg).not.toBeNull()
  const nodes = [...svg.querySelectorAll('g.node')].map(
    (g) => (g as SVGGElement).dataset.node,
  )
  const edges = [...svg.querySelectorAll('g.edge')].map((g) => {
    const el = g as SVGGElement
    return `${el.dataset.from}->${el.dataset.to}`
  })
  return { svg, nodes, edges }
}

describe('refinement console contract', () => {
  beforeEach(() => {
    mountConsoleDom()
  })

  it('displays the session with its failing first verdict', async () => {
    const { app } = makeConsole()
    await app.load()
    expect(document.querySelector('#header h1')!.textContent).toBe(
      'Cross the road at the traffic light',
    )
    expect(document.querySelector('#header .session-status')!.textContent).toBe('FAIL')
    const badges = [...document.querySelectorAll('#timeline .badge')]
    expect(badges.map((b) => b.textContent)).toEqual(['FAIL'])
    expect(document.querySelector('#trace .projection')!.textContent).toBe(
      'model projection: [loop p0]',
    )
  })

  it('renders exactly the node/edge sets served as DOT for the revision', async () => {
    const { app } = makeConsole()
    await app.load()

    const servedController = parseDot(recordedBody('GET', '/sessions/s1/dot/controller-1'))
    const controller = renderedGraph('controller-graph')
    expect(new Set(controller.nodes)).toEqual(
      new Set(servedController.nodes.map((n) => n.id)),
    )
    expect(new Set(controller.edges)).toEqual(
      new Set(servedController.edges.map((e) => `${e.from}->${e.to}`)),
    )
    // initial marked, absorbing double-circled
    expect(controller.svg.querySelector('g.node.initial')).not.toBeNull()
    expect(controller.svg.querySelector('g.node.absorbing circle + circle')).not.toBeNull()

    const servedModel = parseDot(recordedBody('GET', '/sessions/s1/dot/model'))
    const model = renderedGraph('model-graph')
    expect(new Set(model.nodes)).toEqual(new Set(servedModel.nodes.map((n) => n.id)))
    expect(new Set(model.edges)).toEqual(
      new Set(servedModel.edges.map((e) => `${e.from}->${e.to}`)),
    )
    // edge labels keep the (condition, action) form
    const labels = [...controller.svg.querySelectorAll('.edge-label')].map(
      (t) => t.textContent,
    )
    expect(labels).toContain('(true, locate traffic light)')
  })

  it('plays the p0-loop counterexample with a pulsing model node', async () => {
    const { app } = makeConsole()
    await app.load()
    ;(document.querySelector('#play-trace') as HTMLButtonElement).click()
    await new Promise((r) => setTimeout(r, 0))

    // every step of this lasso stays at model state p0
    const steps = [...document.querySelectorAll('#trace .trace-step')]
    expect(steps.length).toBeGreaterThan(0)
    for (const step of steps) {
      expect((step as HTMLElement).dataset.model).toBe('p0')
    }
    expect(document.querySelector('#trace .trace-step.current')).not.toBeNull()

    // stepping pulses the model graph's p0 node
    const stepButton = document.querySelector('#step-trace') as HTMLButtonElement
    stepButton.click()
    await new Promise((r) => setTimeout(r, 10))
    const pulsing = document.querySelector('#model-graph g.node.pulse') as SVGGElement
    expect(pulsing).not.toBeNull()
    expect(pulsing.dataset.node).toBe('p0')

    // the loop tail keeps pulsing p0 forever
    for (let i = 0; i < 4; i++) stepButton.click()
    await new Promise((r) => setTimeout(r, 10))
    const still = document.querySelector('#model-graph g.node.pulse') as SVGGElement
    expect(still.dataset.node).toBe('p0')
  })

  it('submits both refinement instructions and renders the PASS badge', async () => {
    const { app, calls } = makeConsole()
    await app.load()

    await app.submitManual(INSTRUCTION_1)
    let state = app.view.state!
    expect(state.status).toBe('fail')
    expect(state.iterations!.length).toBe(2)
    const projection = app.view.counterexample()!.projection
    expect(projection).toEqual({ stem: ['p0', 'p1', 'p3'], loop: ['p5'] })
    // the graph advanced to the refined controller
    const labels = [...document.querySelectorAll('#controller-graph .edge-label')].map(
      (t) => t.textContent,
    )
    expect(labels).toContain('(true, approach pedestrian crossing)')

    await app.submitManual(INSTRUCTION_2)
    state = app.view.state!
    expect(state.status).toBe('pass')
    expect(state.iterations!.length).toBe(3)
    const badges = [...document.querySelectorAll('#timeline .badge')].map(
      (b) => b.textContent,
    )
    expect(badges).toEqual(['FAIL', 'FAIL', 'PASS'])
    expect(document.querySelector('#header .session-status')!.textContent).toBe('PASS')

    // playback is disabled on the passing revision
    expect((document.querySelector('#play-trace') as HTMLButtonElement).disabled).toBe(true)
    expect((document.querySelector('#submit-refine') as HTMLButtonElement).disabled).toBe(true)

    // and the final controller graph matches the served third revision
    const served = parseDot(recordedBody('GET', '/sessions/s1/dot/controller-3'))
    const rendered = renderedGraph('controller-graph')
    expect(new Set(rendered.nodes)).toEqual(new Set(served.nodes.map((n) => n.id)))

    // every mutation went through the API
    const posts = calls.filter((c) => c.startsWith('POST'))
    expect(posts).toEqual([
      'POST /sessions/s1/refine-manual',
      'POST /sessions/s1/refine-manual',
    ])
  })

  it('ignores submissions while the session is busy', async () => {
    const { app, calls } = makeConsole()
    await app.load()
    app.view.state!.status = 'querying'
    const before = calls.length
    await app.submitManual(INSTRUCTION_1)
    expect(calls.length).toBe(before)
  })
})
