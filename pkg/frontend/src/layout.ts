/** Pure board geometry: per-game layout modules producing a view model
 * whose hit targets map one-to-one onto the server's action ids. */

import type { StatePayload } from "./types.js";

export type ShapeKind = "square" | "hexcell" | "tile" | "token" | "control";

export interface CellShape {
  /** Action id POSTed when this shape is clicked, or null if inert. */
  action: number | null;
  /** Index into state.cells rendered by this shape, or null for controls. */
  cell: number | null;
  points: [number, number][];
  cx: number;
  cy: number;
  kind: ShapeKind;
  content: number;
  label?: string;
}

export interface BoardViewModel {
  game: string;
  width: number;
  height: number;
  shapes: CellShape[];
}

export interface GameSpec {
  id: "tictactoe" | "connect4" | "2048" | "hex" | "nim";
  size?: number;
  heaps?: number[];
}

export function parseGameSpec(spec: string): GameSpec {
  if (spec === "tictactoe" || spec === "connect4" || spec === "2048") {
    return { id: spec };
  }
  const hex = spec.match(/^hex-(\d+)$/);
  if (hex) return { id: "hex", size: parseInt(hex[1]!, 10) };
  const nim = spec.match(/^nim-([\d,]+)$/);
  if (nim) return { id: "nim", heaps: nim[1]!.split(",").map((h) => parseInt(h, 10)) };
  throw new Error(`unknown game spec ${spec}`);
}

function rect(x: number, y: number, w: number, h: number): [number, number][] {
  return [
    [x, y],
    [x + w, y],
    [x + w, y + h],
    [x, y + h],
  ];
}

// ------------------------------------------------------------ tictactoe

export function tictactoeLayout(state: StatePayload, cellSize = 100): BoardViewModel {
  const shapes: CellShape[] = [];
  for (let r = 0; r < 3; r++) {
    for (let c = 0; c < 3; c++) {
      const i = r * 3 + c;
      shapes.push({
        action: i,
        cell: i,
        points: rect(c * cellSize, r * cellSize, cellSize, cellSize),
        cx: (c + 0.5) * cellSize,
        cy: (r + 0.5) * cellSize,
        kind: "square",
        content: state.cells[i]!,
      });
    }
  }
  return { game: "tictactoe", width: 3 * cellSize, height: 3 * cellSize, shapes };
}

// ------------------------------------------------------------- connect4
// Cells are row-major with row 0 at the BOTTOM; the action is the column.

export function connect4Layout(state: StatePayload, cellSize = 64): BoardViewModel {
  const cols = 7;
  const rows = 6;
  const shapes: CellShape[] = [];
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const i = r * cols + c;
      const y = (rows - 1 - r) * cellSize; // row 0 drawn at the bottom
      shapes.push({
        action: c,
        cell: i,
        points: rect(c * cellSize, y, cellSize, cellSize),
        cx: (c + 0.5) * cellSize,
        cy: y + 0.5 * cellSize,
        kind: "square",
        content: state.cells[i]!,
      });
    }
  }
  return { game: "connect4", width: cols * cellSize, height: rows * cellSize, shapes };
}

// ------------------------------------------------------------------ hex
// Flat-top hexagons on a sheared axial grid: cell (r, c) sits at
// x = 1.5·s·c, y = √3·s·(r + c/2), producing the classic diamond where
// player 0 (black) connects the two row edges.

export function hexLayout(k: number, state: StatePayload, s = 28): BoardViewModel {
  const sqrt3 = Math.sqrt(3);
  const pad = s * 1.2;
  const shapes: CellShape[] = [];
  for (let r = 0; r < k; r++) {
    for (let c = 0; c < k; c++) {
      const i = r * k + c;
      const cx = pad + 1.5 * s * c;
      const cy = pad + sqrt3 * s * (r + c / 2);
      const points: [number, number][] = [];
      for (let corner = 0; corner < 6; corner++) {
        const a = (Math.PI / 3) * corner;
        points.push([cx + s * Math.cos(a), cy + s * Math.sin(a)]);
      }
      shapes.push({
        action: i,
        cell: i,
        points,
        cx,
        cy,
        kind: "hexcell",
        content: state.cells[i]!,
      });
    }
  }
  const width = 2 * pad + 1.5 * s * (k - 1) + s;
  const height = 2 * pad + sqrt3 * s * (k - 1 + (k - 1) / 2) + s;
  return { game: "hex", width, height, shapes };
}

// ----------------------------------------------------------------- 2048
// 4x4 exponent tiles plus four directional controls (the action ids):
// 0 left, 1 up, 2 right, 3 down.

export const DIRECTION_NAMES = ["left", "up", "right", "down"] as const;

export function layout2048(state: StatePayload, cellSize = 80): BoardViewModel {
  const margin = cellSize * 0.75;
  const grid = 4 * cellSize;
  const shapes: CellShape[] = [];
  for (let r = 0; r < 4; r++) {
    for (let c = 0; c < 4; c++) {
      const i = r * 4 + c;
      shapes.push({
        action: null,
        cell: i,
        points: rect(margin + c * cellSize, margin + r * cellSize, cellSize, cellSize),
        cx: margin + (c + 0.5) * cellSize,
        cy: margin + (r + 0.5) * cellSize,
        kind: "tile",
        content: state.cells[i]!,
      });
    }
  }
  const side = margin * 0.8;
  const controls: Array<[number, number, number, number, number]> = [
    [0, 0, margin, side, grid], // left
    [1, margin, 0, grid, side], // up
    [2, margin + grid, margin, side, grid], // right
    [3, margin, margin + grid, grid, side], // down
  ];
  for (const [action, x, y, w, h] of controls) {
    const off = (margin - side) / 2;
    const [px, py] = action % 2 === 0 ? [x + off, y] : [x, y + off];
    shapes.push({
      action,
      cell: null,
      points: rect(px, py, w, h),
      cx: px + w / 2,
      cy: py + h / 2,
      kind: "control",
      content: 0,
      label: DIRECTION_NAMES[action]!,
    });
  }
  const total = 2 * margin + grid;
  return { game: "2048", width: total, height: total, shapes };
}

// ------------------------------------------------------------------ nim
// One column of tokens per heap, stacked from the bottom.  Clicking a
// token takes it and every token above it, so token j (0-based from the
// bottom) of heap h with current size n maps to "take n − j":
// action = h·maxHeap + (n − j − 1).

export function nimLayout(
  heaps: number[],
  state: StatePayload,
  tokenSize = 36,
): BoardViewModel {
  const maxHeap = Math.max(...heaps);
  const gap = tokenSize * 0.25;
  const colPitch = tokenSize * 2;
  const height = maxHeap * (tokenSize + gap) + gap + tokenSize;
  const shapes: CellShape[] = [];
  for (let h = 0; h < heaps.length; h++) {
    const size = state.cells[h]!;
    const x = gap + h * colPitch + (colPitch - tokenSize) / 2;
    for (let j = 0; j < size; j++) {
      const y = height - (j + 1) * (tokenSize + gap) - tokenSize / 2;
      shapes.push({
        action: h * maxHeap + (size - j - 1),
        cell: h,
        points: rect(x, y, tokenSize, tokenSize),
        cx: x + tokenSize / 2,
        cy: y + tokenSize / 2,
        kind: "token",
        content: 1,
      });
    }
  }
  return {
    game: "nim",
    width: gap + heaps.length * colPitch,
    height,
    shapes,
  };
}

// ------------------------------------------------------------- dispatch

export function buildViewModel(spec: string, state: StatePayload): BoardViewModel {
  const g = parseGameSpec(spec);
  switch (g.id) {
    case "tictactoe":
      return tictactoeLayout(state);
    case "connect4":
      return connect4Layout(state);
    case "2048":
      return layout2048(state);
    case "hex":
      return hexLayout(g.size!, state);
    case "nim":
      return nimLayout(g.heaps!, state);
  }
}

// ------------------------------------------------------------ hit tests

function pointInPolygon(points: [number, number][], x: number, y: number): boolean {
  let inside = false;
  for (let i = 0, j = points.length - 1; i < points.length; j = i++) {
    const [xi, yi] = points[i]!;
    const [xj, yj] = points[j]!;
    if (yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

/** Topmost clickable shape under (x, y), or null. */
export function hitTest(vm: BoardViewModel, x: number, y: number): CellShape | null {
  for (let i = vm.shapes.length - 1; i >= 0; i--) {
    const shape = vm.shapes[i]!;
    if (shape.action !== null && pointInPolygon(shape.points, x, y)) {
      return shape;
    }
  }
  return null;
}

// ------------------------------------------------- optimistic rendering
// Local prediction of the next state for deterministic placements; the
// authoritative server event replaces it.  Stochastic 2048 (and anything
// unpredictable) returns null: no optimistic rendering.

export function optimisticNext(
  spec: string,
  state: StatePayload,
  action: number,
  seat: number,
): StatePayload | null {
  const g = parseGameSpec(spec);
  const cells = state.cells.slice();
  if (g.id === "tictactoe" || g.id === "hex") {
    cells[action] = seat + 1;
  } else if (g.id === "connect4") {
    // pieces are 2/3 in the reachability encoding; the drop lands on the
    // lowest empty cell (content < 2) of the column
    let landed = -1;
    for (let r = 0; r < 6; r++) {
      const i = r * 7 + action;
      if (cells[i]! < 2) {
        landed = i;
        break;
      }
    }
    if (landed < 0) return null;
    cells[landed] = seat + 2;
    const above = landed + 7;
    if (above < 42 && cells[above] === 0) cells[above] = 1; // now reachable
  } else if (g.id === "nim") {
    const maxHeap = Math.max(...g.heaps!);
    const heap = Math.floor(action / maxHeap);
    const take = (action % maxHeap) + 1;
    cells[heap] = cells[heap]! - take;
  } else {
    return null;
  }
  return {
    ...state,
    cells,
    to_move: (state.to_move + 1) % 2,
    move_count: state.move_count + 1,
    legal_actions: [], // frozen until the server confirms
  };
}
