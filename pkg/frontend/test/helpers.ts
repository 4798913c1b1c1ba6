// Replay fetch: serves the recorded service exchanges as per-endpoint
// FIFO queues (the last response sticks), so polling after a mutation
// observes the same evolving state the live service produced.

import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import { FetchLike } from '../src/api'

interface Recorded {
  method: string
  path: string
  request_body: unknown
  status: number
  content_type: string
  body: string
}

const HERE = dirname(fileURLToPath(import.meta.url))

export function loadRecorded(): Recorded[] {
  const raw = readFileSync(join(HERE, '..', 'fixtures', 'recorded.json'), 'utf-8')
  return JSON.parse(raw) as Recorded[]
}

export function recordedBody(method: string, path: string, nth = 0): string {
  const matches = loadRecorded().filter((r) => r.method === method && r.path === path)
  return matches[Math.min(nth, matches.length - 1)].body
}

export function replayFetch(): { fetch: FetchLike; calls: string[] } {
  const queues = new Map<string, Recorded[]>()
  for (const entry of loadRecorded()) {
    const key = `${entry.method} ${entry.path}`
    if (!queues.has(key)) queues.set(key, [])
    queues.get(key)!.push(entry)
  }
  const calls: string[] = []
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? 'GET'
    const key = `${method} ${url}`
    calls.push(key)
    const queue = queues.get(key)
    if (!queue || queue.length === 0) {
      return new Response(JSON.stringify({ detail: `unrecorded: ${key}` }), {
        status: 404,
        headers: { 'content-type': 'application/json' },
      })
    }
    const entry = queue.length > 1 ? queue.shift()! : queue[0]
    if (entry.request_body != null && init?.body != null) {
      const got = JSON.parse(String(init.body))
      const want = entry.request_body as Record<string, unknown>
      for (const [k, v] of Object.entries(want)) {
        if (JSON.stringify(got[k]) !== JSON.stringify(v)) {
          return new Response(
            JSON.stringify({ detail: `request body mismatch on ${k}` }),
            { status: 409, headers: { 'content-type': 'application/json' } },
          )
        }
      }
    }
    return new Response(entry.body, {
      status: entry.status,
      headers: { 'content-type': entry.content_type },
    })
  }
  return { fetch: fetchImpl, calls }
}

export function mountConsoleDom(): void {
  document.body.innerHTML = `
    <div id="header"></div>
    <div id="timeline"></div>
    <div id="controller-graph"></div>
    <div id="model-graph"></div>
    <div id="trace"></div>
    <div id="controls"></div>
  `
}
