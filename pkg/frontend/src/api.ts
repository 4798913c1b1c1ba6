// Typed client for the session service. The console never mutates domain
// state locally: every change round-trips through these endpoints.

export interface SpecResult {
  name: string
  passed: boolean
  counterexample: CounterexamplePayload | null
}

export interface TraceEntry {
  model: string
  controller: string
  label: string[]
}

export interface CounterexamplePayload {
  stem: TraceEntry[]
  loop: TraceEntry[]
  projection: { stem: string[]; loop: string[] }
}

export interface IterationInfo {
  index: number
  kind: string
  prompt: string | null
  steps: { number: string; text: string }[]
  results: SpecResult[]
  dot: { controller: string }
}

export interface SessionState {
  id: string
  status: string
  revision: number
  error: string | null
  task?: string
  steps?: { number: string; text: string }[]
  specs?: { name: string; formula: string }[]
  depth?: number
  max_depth?: number
  synonyms?: Record<string, string>
  iterations?: IterationInfo[]
  dot?: { controller: string; model: string }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

const SETTLED = new Set(['pass', 'fail', 'unrepresentable', 'error'])

export function isSettled(status: string): boolean {
  return SETTLED.has(status)
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(`${status}: ${message}`)
  }
}

export class ApiClient {
  constructor(
    private base: string = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(this.base + path, init)
    if (resp.status >= 400) {
      let detail = resp.statusText
      try {
        detail = (await resp.json()).detail ?? detail
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail)
    }
    return resp
  }

  async health(): Promise<{ ok: boolean }> {
    return (await this.request('/healthz')).json()
  }

  async getSession(id: string): Promise<SessionState> {
    return (await this.request(`/sessions/${id}`)).json()
  }

  async getDot(path: string): Promise<string> {
    return (await this.request(path)).text()
  }

  async refineManual(id: string, instruction: string): Promise<SessionState> {
    return (
      await this.request(`/sessions/${id}/refine-manual`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ instruction }),
      })
    ).json()
  }

  async refineAuto(id: string): Promise<SessionState> {
    return (
      await this.request(`/sessions/${id}/refine-auto`, { method: 'POST' })
    ).json()
  }

  async prune(id: string): Promise<SessionState> {
    return (
      await this.request(`/sessions/${id}/prune`, { method: 'POST' })
    ).json()
  }

  // Poll until the session settles at a revision past `sinceRevision`.
  async pollUntilSettled(
    id: string,
    sinceRevision: number,
    opts: { intervalMs?: number; attempts?: number; sleep?: (ms: number) => Promise<void> } = {},
  ): Promise<SessionState> {
    const attempts = opts.attempts ?? 200
    const interval = opts.intervalMs ?? 150
    const sleep = opts.sleep ?? ((ms) => new Promise((r) => setTimeout(r, ms)))
    let state = await this.getSession(id)
    for (let i = 0; i < attempts; i++) {
      if (state.revision >= sinceRevision && isSettled(state.status)) return state
      await sleep(interval)
      state = await this.getSession(id)
    }
    return state
  }
}
