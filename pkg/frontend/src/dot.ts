// Parser for the DOT subset the service emits: one digraph, quoted node
// ids with label/shape attributes, quoted edges with a label attribute,
// and a __start pseudo-node marking the initial state.

export interface GraphNode {
  id: string
  label: string
  shape: 'circle' | 'doublecircle'
}

export interface GraphEdge {
  from: string
  to: string
  label: string
}

export interface Graph {
  name: string
  nodes: GraphNode[]
  edges: GraphEdge[]
  initial: string | null
}

const HEADER = /^digraph\s+(\w+)\s*\{$/
const NODE = /^"((?:[^"\\]|\\.)*)"\s*\[label="((?:[^"\\]|\\.)*)"(?:,\s*shape=(\w+))?\];$/
const EDGE = /^"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"(?:\s*\[label="((?:[^"\\]|\\.)*)"\])?;$/
const START_EDGE = /^__start\s*->\s*"((?:[^"\\]|\\.)*)";$/

function unescape(text: string): string {
  return text.replace(/\\(.)/g, '$1')
}

export function parseDot(text: string): Graph {
  const lines = text
    .split('\n')
    .map((l) => l.trim())
    .filter((l) => l.length > 0)
  if (lines.length < 2) throw new Error('not a DOT digraph')
  const header = HEADER.exec(lines[0])
  if (!header) throw new Error(`bad DOT header: ${lines[0]}`)
  const graph: Graph = { name: header[1], nodes: [], edges: [], initial: null }
  for (const line of lines.slice(1)) {
    if (line === '}' || line.startsWith('rankdir') || line.startsWith('node [') ||
        line.startsWith('__start [')) continue
    const start = START_EDGE.exec(line)
    if (start) {
      graph.initial = unescape(start[1])
      continue
    }
    const edge = EDGE.exec(line)
    if (edge) {
      graph.edges.push({
        from: unescape(edge[1]),
        to: unescape(edge[2]),
        label: edge[3] ? unescape(edge[3]) : '',
      })
      continue
    }
    const node = NODE.exec(line)
    if (node) {
      graph.nodes.push({
        id: unescape(node[1]),
        label: unescape(node[2]),
        shape: node[3] === 'doublecircle' ? 'doublecircle' : 'circle',
      })
      continue
    }
    throw new Error(`unrecognized DOT line: ${line}`)
  }
  if (lines[lines.length - 1] !== '}') throw new Error('unterminated digraph')
  return graph
}
