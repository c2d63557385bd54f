/** Canvas renderer.  Pure drawing: everything it shows comes from the
 * view model, the inspect payload, and the last move marker. */

import { formatValue, valueShade } from "./color.js";
import type { BoardViewModel, CellShape } from "./layout.js";
import type { InspectAction } from "./types.js";
import type { LastMove } from "./store.js";

const TILE_SHADES = [
  "#cdc1b4", "#eee4da", "#ede0c8", "#f2b179", "#f59563", "#f67c5f",
  "#f65e3b", "#edcf72", "#edcc61", "#edc850", "#edc22e", "#edc22e",
];

function tracePolygon(ctx: CanvasRenderingContext2D, points: [number, number][]): void {
  ctx.beginPath();
  ctx.moveTo(points[0]![0], points[0]![1]);
  for (let i = 1; i < points.length; i++) ctx.lineTo(points[i]![0], points[i]![1]);
  ctx.closePath();
}

function stone(
  ctx: CanvasRenderingContext2D,
  shape: CellShape,
  radius: number,
  fill: string,
): void {
  ctx.beginPath();
  ctx.arc(shape.cx, shape.cy, radius, 0, 2 * Math.PI);
  ctx.fillStyle = fill;
  ctx.fill();
  ctx.strokeStyle = "#333";
  ctx.stroke();
}

function drawShape(
  ctx: CanvasRenderingContext2D,
  vm: BoardViewModel,
  shape: CellShape,
  highlight: boolean,
): void {
  const size = Math.abs(shape.points[1]![0] - shape.points[0]![0]) || 40;
  switch (shape.kind) {
    case "square": {
      tracePolygon(ctx, shape.points);
      ctx.fillStyle = vm.game === "connect4" ? "#2c5f8a" : "#fdfdfd";
      ctx.fill();
      ctx.strokeStyle = "#555";
      ctx.stroke();
      if (vm.game === "connect4") {
        const fill =
          shape.content === 2 ? "#d64541" : shape.content === 3 ? "#f4d03f" : "#fdfdfd";
        stone(ctx, shape, size * 0.38, fill);
      } else if (shape.content > 0) {
        ctx.fillStyle = shape.content === 1 ? "#2574a9" : "#d64541";
        ctx.font = `${size * 0.6}px sans-serif`;
        ctx.textAlign = "center";
        ctx.textBaseline = "middle";
        ctx.fillText(shape.content === 1 ? "X" : "O", shape.cx, shape.cy);
      }
      break;
    }
    case "hexcell": {
      tracePolygon(ctx, shape.points);
      ctx.fillStyle = "#e8d9b5";
      ctx.fill();
      ctx.strokeStyle = "#6b5b3e";
      ctx.stroke();
      if (shape.content === 1) stone(ctx, shape, size * 0.28, "#222");
      if (shape.content === 2) stone(ctx, shape, size * 0.28, "#fafafa");
      break;
    }
    case "tile": {
      tracePolygon(ctx, shape.points);
      ctx.fillStyle = TILE_SHADES[Math.min(shape.content, TILE_SHADES.length - 1)]!;
      ctx.fill();
      ctx.strokeStyle = "#bbada0";
      ctx.stroke();
      if (shape.content > 0) {
        ctx.fillStyle = shape.content <= 2 ? "#776e65" : "#f9f6f2";
        ctx.font = `bold ${size * 0.35}px sans-serif`;
        ctx.textAlign = "center";
        ctx.textBaseline = "middle";
        ctx.fillText(String(2 ** shape.content), shape.cx, shape.cy);
      }
      break;
    }
    case "token": {
      stone(ctx, shape, size * 0.45, "#9b59b6");
      break;
    }
    case "control": {
      tracePolygon(ctx, shape.points);
      ctx.fillStyle = highlight ? "#f5d76e" : "#dfd8ce";
      ctx.fill();
      ctx.strokeStyle = "#8e8276";
      ctx.stroke();
      ctx.fillStyle = "#555";
      ctx.font = "14px sans-serif";
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(shape.label ?? "", shape.cx, shape.cy);
      break;
    }
  }
}

/** The shape that should carry an action's inspect overlay. */
export function overlayShape(vm: BoardViewModel, action: number): CellShape | null {
  const candidates = vm.shapes.filter((s) => s.action === action);
  if (candidates.length === 0) return null;
  if (vm.game === "connect4") {
    // the drop lands on the column's reachable-empty cell
    return candidates.find((s) => s.content === 1) ?? candidates[0]!;
  }
  return candidates[0]!;
}

export function drawBoard(
  ctx: CanvasRenderingContext2D,
  vm: BoardViewModel,
  inspect: InspectAction[] | null,
  lastMove: LastMove | null,
): void {
  ctx.clearRect(0, 0, vm.width, vm.height);
  for (const shape of vm.shapes) {
    const highlight =
      shape.kind === "control" && lastMove !== null && shape.action === lastMove.action;
    drawShape(ctx, vm, shape, highlight);
  }
  if (inspect) {
    for (const entry of inspect) {
      const shape = overlayShape(vm, entry.action);
      if (!shape) continue;
      tracePolygon(ctx, shape.points);
      ctx.save();
      ctx.globalAlpha = 0.55;
      ctx.fillStyle = valueShade(entry.color);
      ctx.fill();
      ctx.restore();
      ctx.fillStyle = "#111";
      ctx.font = "12px sans-serif";
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(formatValue(entry.value), shape.cx, shape.cy);
    }
  }
}
