// Deterministic layered layout: rank = BFS distance from the initial
// state, vertical order within a rank follows discovery order.

import { Graph } from './dot'

export interface Placed {
  id: string
  x: number
  y: number
}

export interface Layout {
  positions: Map<string, Placed>
  width: number
  height: number
}

export const RANK_DX = 140
export const ROW_DY = 90
export const MARGIN = 60

export function layoutGraph(graph: Graph): Layout {
  const adjacency = new Map<string, string[]>()
  for (const node of graph.nodes) adjacency.set(node.id, [])
  for (const edge of graph.edges) {
    if (edge.from !== edge.to) adjacency.get(edge.from)?.push(edge.to)
  }

  const rank = new Map<string, number>()
  const queue: string[] = []
  if (graph.initial && adjacency.has(graph.initial)) {
    rank.set(graph.initial, 0)
    queue.push(graph.initial)
  }
  while (queue.length) {
    const current = queue.shift()!
    for (const next of adjacency.get(current) ?? []) {
      if (!rank.has(next)) {
        rank.set(next, (rank.get(current) ?? 0) + 1)
        queue.push(next)
      }
    }
  }
  let maxRank = 0
  for (const r of rank.values()) maxRank = Math.max(maxRank, r)
  for (const node of graph.nodes) {
    if (!rank.has(node.id)) rank.set(node.id, ++maxRank)
  }

  const rows = new Map<number, number>()
  const positions = new Map<string, Placed>()
  for (const node of graph.nodes) {
    const r = rank.get(node.id)!
    const row = rows.get(r) ?? 0
    rows.set(r, row + 1)
    positions.set(node.id, {
      id: node.id,
      x: MARGIN + r * RANK_DX,
      y: MARGIN + row * ROW_DY,
    })
  }
  let maxRow = 0
  for (const count of rows.values()) maxRow = Math.max(maxRow, count)
  let width = MARGIN * 2
  for (const r of rows.keys()) width = Math.max(width, MARGIN * 2 + r * RANK_DX)
  return {
    positions,
    width,
    height: MARGIN * 2 + Math.max(0, maxRow - 1) * ROW_DY,
  }
}
