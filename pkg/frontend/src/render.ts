/** Canvas rendering for the two views: the in-tree over 2-D data and the
 * (|potential|, weight) decision graph. */

import type { BoxSelection, DecisionGraphPoint } from "./api.js";
import type { ViewState } from "./state.js";
import { colorForRoot } from "./state.js";
import { fitTransform, Transform, Viewport } from "./transform.js";

const ROOT_RING = "#111";
const CUT_EDGE = "rgba(160, 160, 160, 0.5)";
const LIVE_EDGE = "rgba(90, 90, 90, 0.8)";

export function treeTransform(view: ViewState, vp: Viewport): Transform {
	return fitTransform(view.coords ?? [[0, 0]], vp);
}

export function drawTree(
	ctx: CanvasRenderingContext2D,
	view: ViewState,
	vp: Viewport,
): Transform {
	const tf = treeTransform(view, vp);
	ctx.clearRect(0, 0, vp.width, vp.height);
	if (!view.coords) return tf;
	const pos = view.coords.map((c) => tf.toScreen(c));

	for (const e of view.edges) {
		const [x0, y0] = pos[e.from - 1];
		const [x1, y1] = pos[e.to - 1];
		ctx.beginPath();
		ctx.moveTo(x0, y0);
		ctx.lineTo(x1, y1);
		if (e.cut) {
			ctx.setLineDash([4, 4]);
			ctx.strokeStyle = CUT_EDGE;
		} else {
			ctx.setLineDash([]);
			ctx.strokeStyle = LIVE_EDGE;
		}
		ctx.lineWidth = 1;
		ctx.stroke();
		if (!e.cut) drawArrowHead(ctx, x0, y0, x1, y1);
	}
	ctx.setLineDash([]);

	view.coords.forEach((_, i) => {
		const [x, y] = pos[i];
		ctx.beginPath();
		ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
		ctx.fillStyle = colorForRoot(view.rootOf[i]);
		ctx.fill();
	});

	for (const r of view.roots) {
		const [x, y] = pos[r - 1];
		ctx.beginPath();
		ctx.arc(x, y, 7, 0, 2 * Math.PI);
		ctx.strokeStyle = ROOT_RING;
		ctx.lineWidth = 1.6;
		ctx.stroke();
	}

	ctx.strokeStyle = "#d22";
	ctx.lineWidth = 1.6;
	for (const c of view.crosses) {
		const [x, y] = tf.toScreen([c.x, c.y]);
		ctx.beginPath();
		ctx.moveTo(x - 5, y - 5);
		ctx.lineTo(x + 5, y + 5);
		ctx.moveTo(x - 5, y + 5);
		ctx.lineTo(x + 5, y - 5);
		ctx.stroke();
	}
	return tf;
}

function drawArrowHead(
	ctx: CanvasRenderingContext2D,
	x0: number,
	y0: number,
	x1: number,
	y1: number,
): void {
	const ang = Math.atan2(y1 - y0, x1 - x0);
	const size = 5;
	ctx.beginPath();
	ctx.moveTo(x1, y1);
	ctx.lineTo(x1 - size * Math.cos(ang - 0.4), y1 - size * Math.sin(ang - 0.4));
	ctx.moveTo(x1, y1);
	ctx.lineTo(x1 - size * Math.cos(ang + 0.4), y1 - size * Math.sin(ang + 0.4));
	ctx.stroke();
}

/** Scatter of (|P|, W); returns the transform so drags map back to data. */
export function drawDecisionGraph(
	ctx: CanvasRenderingContext2D,
	points: DecisionGraphPoint[],
	vp: Viewport,
	box: BoxSelection | null,
	rootOf: number[],
): Transform {
	const finite: [number, number][] = points
		.filter((p) => p.w !== null)
		.map((p) => [p.absP, p.w as number]);
	const tf = fitTransform(finite.length ? finite : [[0, 0]], vp);
	ctx.clearRect(0, 0, vp.width, vp.height);
	for (const p of points) {
		if (p.w === null) continue;
		const [x, y] = tf.toScreen([p.absP, p.w]);
		ctx.beginPath();
		ctx.arc(x, y, 3, 0, 2 * Math.PI);
		ctx.fillStyle = colorForRoot(rootOf[p.index - 1]);
		ctx.fill();
	}
	if (box) {
		const [x0, y0] = tf.toScreen([box.pMin, box.wMax]);
		const [x1, y1] = tf.toScreen([box.pMax, box.wMin]);
		ctx.strokeStyle = "#d22";
		ctx.lineWidth = 1.4;
		ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
	}
	return tf;
}
