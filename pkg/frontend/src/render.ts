// DOM rendering for the console: SVG graphs, the iteration timeline with
// verdict badges, the counterexample trace panel and the control row.

import { Graph, parseDot } from './dot'
import { layoutGraph } from './layout'
import { SessionView } from './view'

const SVG_NS = 'http://www.w3.org/2000/svg'
const NODE_RADIUS = 26

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag)
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value)
  return el
}

export interface Highlight {
  nodeId?: string
}

export function renderGraph(
  container: HTMLElement,
  dotText: string,
  highlight: Highlight = {},
): Graph {
  const graph = parseDot(dotText)
  const layout = layoutGraph(graph)
  container.textContent = ''
  const svg = svgEl('svg', {
    viewBox: `0 0 ${layout.width + 80} ${layout.height + 40}`,
    width: String(layout.width + 80),
    class: 'graph',
    'data-graph-name': graph.name,
  })

  for (const edge of graph.edges) {
    const a = layout.positions.get(edge.from)!
    const b = layout.positions.get(edge.to)!
    const group = svgEl('g', { class: 'edge', 'data-from': edge.from, 'data-to': edge.to })
    let labelX: number
    let labelY: number
    if (edge.from === edge.to) {
      const path = svgEl('path', {
        d: `M ${a.x - 10} ${a.y - NODE_RADIUS + 4}
            C ${a.x - 34} ${a.y - NODE_RADIUS - 34}, ${a.x + 34} ${a.y - NODE_RADIUS - 34},
              ${a.x + 10} ${a.y - NODE_RADIUS + 4}`,
        class: 'edge-line self-loop',
        fill: 'none',
      })
      group.appendChild(path)
      labelX = a.x
      labelY = a.y - NODE_RADIUS - 36
    } else {
      const line = svgEl('line', {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        class: 'edge-line',
      })
      group.appendChild(line)
      labelX = (a.x + b.x) / 2
      labelY = (a.y + b.y) / 2 - 6
    }
    if (edge.label) {
      const text = svgEl('text', {
        x: String(labelX),
        y: String(labelY),
        class: 'edge-label',
        'text-anchor': 'middle',
      })
      text.textContent = edge.label
      group.appendChild(text)
    }
    svg.appendChild(group)
  }

  for (const node of graph.nodes) {
    const pos = layout.positions.get(node.id)!
    const classes = ['node']
    if (node.id === graph.initial) classes.push('initial')
    if (node.shape === 'doublecircle') classes.push('absorbing')
    if (highlight.nodeId === node.id) classes.push('pulse')
    const group = svgEl('g', { class: classes.join(' '), 'data-node': node.id })
    group.appendChild(svgEl('circle', {
      cx: String(pos.x),
      cy: String(pos.y),
      r: String(NODE_RADIUS),
    }))
    if (node.shape === 'doublecircle') {
      group.appendChild(svgEl('circle', {
        cx: String(pos.x),
        cy: String(pos.y),
        r: String(NODE_RADIUS - 5),
      }))
    }
    if (node.id === graph.initial) {
      group.appendChild(svgEl('line', {
        x1: String(pos.x - NODE_RADIUS - 26),
        y1: String(pos.y),
        x2: String(pos.x - NODE_RADIUS),
        y2: String(pos.y),
        class: 'initial-arrow',
      }))
    }
    const text = svgEl('text', {
      x: String(pos.x),
      y: String(pos.y + 4),
      'text-anchor': 'middle',
      class: 'node-label',
    })
    text.textContent = node.label
    group.appendChild(text)
    svg.appendChild(group)
  }

  container.appendChild(svg)
  return graph
}

export function renderError(container: HTMLElement, message: string): void {
  container.textContent = ''
  const banner = document.createElement('div')
  banner.className = 'error-banner'
  banner.textContent = message
  container.appendChild(banner)
}

export function renderTimeline(
  container: HTMLElement,
  view: SessionView,
  onSelect: (index: number) => void,
): void {
  container.textContent = ''
  const iterations = view.state?.iterations ?? []
  for (const iteration of iterations) {
    const item = document.createElement('button')
    const passed = iteration.results.every((r) => r.passed)
    item.className = 'timeline-item' +
      (iteration.index === view.selectedIteration ? ' selected' : '')
    item.dataset.iteration = String(iteration.index)
    const badge = document.createElement('span')
    badge.className = `badge ${passed ? 'pass' : 'fail'}`
    badge.textContent = passed ? 'PASS' : 'FAIL'
    const label = document.createElement('span')
    label.className = 'timeline-kind'
    label.textContent = `#${iteration.index} ${iteration.kind}`
    item.appendChild(label)
    item.appendChild(badge)
    item.addEventListener('click', () => onSelect(iteration.index))
    container.appendChild(item)
  }
}

export function renderTrace(container: HTMLElement, view: SessionView): void {
  container.textContent = ''
  const cex = view.counterexample()
  if (!cex) {
    const note = document.createElement('div')
    note.className = 'trace-empty'
    note.textContent = view.iterationPassed()
      ? 'All specifications satisfied.'
      : 'No counterexample recorded.'
    container.appendChild(note)
    return
  }
  const projection = document.createElement('div')
  projection.className = 'projection'
  projection.textContent = `model projection: ${view.projectionText()}`
  container.appendChild(projection)

  const list = document.createElement('ol')
  list.className = 'trace-steps'
  view.playbackSteps().forEach((step, i) => {
    const item = document.createElement('li')
    item.className = 'trace-step' +
      (step.inLoop ? ' loop' : '') +
      (i === view.playbackIndex ? ' current' : '')
    item.dataset.model = step.model
    item.dataset.controller = step.controller
    const labels = step.label.length ? step.label.join(', ') : '(empty)'
    item.textContent = `(${step.model}, ${step.controller}) |= ${labels}`
    list.appendChild(item)
  })
  container.appendChild(list)
}

export interface Controls {
  instruction: HTMLInputElement
  submit: HTMLButtonElement
  auto: HTMLButtonElement
  prune: HTMLButtonElement
  play: HTMLButtonElement
  step: HTMLButtonElement
}

export function renderControls(
  container: HTMLElement,
  view: SessionView,
  handlers: {
    onSubmit: (instruction: string) => void
    onAuto: () => void
    onPrune: () => void
    onPlay: () => void
    onStep: () => void
  },
): Controls {
  container.textContent = ''
  const instruction = document.createElement('input')
  instruction.type = 'text'
  instruction.id = 'instruction'
  instruction.placeholder = 'Refinement instruction for the language model'

  const submit = document.createElement('button')
  submit.id = 'submit-refine'
  submit.textContent = 'Refine'
  submit.disabled = !view.canSubmit()
  submit.addEventListener('click', () => handlers.onSubmit(instruction.value))

  const auto = document.createElement('button')
  auto.id = 'submit-auto'
  auto.textContent = 'Auto-refine'
  auto.disabled = !view.canSubmit()
  auto.addEventListener('click', handlers.onAuto)

  const prune = document.createElement('button')
  prune.id = 'submit-prune'
  prune.textContent = 'Prune'
  prune.disabled = !view.canPrune()
  prune.addEventListener('click', handlers.onPrune)

  const play = document.createElement('button')
  play.id = 'play-trace'
  play.textContent = 'Play counterexample'
  play.disabled = !view.canPlay()
  play.addEventListener('click', handlers.onPlay)

  const step = document.createElement('button')
  step.id = 'step-trace'
  step.textContent = 'Step'
  step.disabled = !view.canPlay()
  step.addEventListener('click', handlers.onStep)

  for (const el of [instruction, submit, auto, prune, play, step]) {
    container.appendChild(el)
  }
  return { instruction, submit, auto, prune, play, step }
}

export function renderHeader(container: HTMLElement, view: SessionView): void {
  container.textContent = ''
  const state = view.state
  if (!state) {
    container.textContent = 'No session loaded.'
    return
  }
  const title = document.createElement('h1')
  title.textContent = state.task ?? state.id
  const status = document.createElement('span')
  status.className = `badge session-status ${state.status}`
  status.textContent = state.status.toUpperCase()
  const revision = document.createElement('span')
  revision.className = 'revision'
  revision.textContent = `revision ${state.revision}`
  container.appendChild(title)
  container.appendChild(status)
  container.appendChild(revision)
}
