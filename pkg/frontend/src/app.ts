// Console wiring: fetch session state, render everything, and push user
// actions through the API (the UI holds no domain state of its own).

import { ApiClient, SessionState } from './api'
import { Graph } from './dot'
import {
  renderControls,
  renderError,
  renderGraph,
  renderHeader,
  renderTimeline,
  renderTrace,
} from './render'
import { SessionView } from './view'

export interface ConsoleElements {
  header: HTMLElement
  timeline: HTMLElement
  controllerGraph: HTMLElement
  modelGraph: HTMLElement
  trace: HTMLElement
  controls: HTMLElement
}

export class Console {
  view = new SessionView()
  lastControllerGraph: Graph | null = null
  lastModelGraph: Graph | null = null

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private el: ConsoleElements,
  ) {}

  async load(): Promise<void> {
    const state = await this.api.getSession(this.sessionId)
    this.view.loadState(state)
    await this.renderAll()
  }

  private async renderAll(): Promise<void> {
    const view = this.view
    renderHeader(this.el.header, view)
    renderTimeline(this.el.timeline, view, (index) => {
      view.selectIteration(index)
      void this.renderAll()
    })
    renderTrace(this.el.trace, view)
    renderControls(this.el.controls, view, {
      onSubmit: (instruction) => void this.submitManual(instruction),
      onAuto: () => void this.submitAuto(),
      onPrune: () => void this.submitPrune(),
      onPlay: () => {
        view.startPlayback()
        void this.renderAll()
      },
      onStep: () => {
        view.stepPlayback()
        void this.renderAll()
      },
    })
    await this.renderGraphs()
  }

  private async renderGraphs(): Promise<void> {
    const dotPath = this.view.latestControllerDot()
    const highlight = this.view.currentStep()
    try {
      if (dotPath) {
        const text = await this.api.getDot(dotPath)
        this.lastControllerGraph = renderGraph(this.el.controllerGraph, text, {
          nodeId: highlight?.controller,
        })
      } else {
        this.el.controllerGraph.textContent = 'No controller yet.'
      }
      const modelPath = this.view.state?.dot?.model
      if (modelPath) {
        const text = await this.api.getDot(modelPath)
        this.lastModelGraph = renderGraph(this.el.modelGraph, text, {
          nodeId: highlight?.model,
        })
      }
    } catch (err) {
      renderError(this.el.controllerGraph, `graph render failed: ${err}`)
    }
  }

  private async refresh(since: number): Promise<void> {
    const state = await this.api.pollUntilSettled(this.sessionId, since, {
      intervalMs: 50,
      sleep: (ms) => new Promise((r) => setTimeout(r, ms)),
    })
    this.view.loadState(state)
    await this.renderAll()
  }

  async submitManual(instruction: string): Promise<void> {
    if (!this.view.canSubmit() || !instruction.trim()) return
    const posted: SessionState = await this.api.refineManual(this.sessionId, instruction)
    await this.refresh(posted.revision)
  }

  async submitAuto(): Promise<void> {
    if (!this.view.canSubmit()) return
    const posted = await this.api.refineAuto(this.sessionId)
    await this.refresh(posted.revision)
  }

  async submitPrune(): Promise<void> {
    if (!this.view.canPrune()) return
    const posted = await this.api.prune(this.sessionId)
    await this.refresh(posted.revision)
  }

  playCounterexample(): void {
    this.view.startPlayback()
  }
}

export function consoleElements(root: Document | HTMLElement): ConsoleElements {
  const find = (id: string): HTMLElement => {
    const el = (root as Document).getElementById
      ? (root as Document).getElementById(id)
      : (root as HTMLElement).querySelector(`#${id}`)
    if (!el) throw new Error(`missing console element #${id}`)
    return el as HTMLElement
  }
  return {
    header: find('header'),
    timeline: find('timeline'),
    controllerGraph: find('controller-graph'),
    modelGraph: find('model-graph'),
    trace: find('trace'),
    controls: find('controls'),
  }
}
