/** Application wiring: one canvas, two views (tree / decision graph),
 * cuts by click or box drag, undo, sigma rebuild. Every mutation applies
 * the server's returned state; nothing renders optimistically. */

import { ApiError, DecisionGraphPoint, ItcClient } from "./api.js";
import { drawDecisionGraph, drawTree } from "./render.js";
import { ViewState } from "./state.js";
import type { Transform, Viewport } from "./transform.js";

type Mode = "tree" | "dcc";

const params = new URLSearchParams(location.search);
const client = new ItcClient(params.get("api") ?? "");
const view = new ViewState();

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const modeSelect = document.getElementById("mode") as HTMLSelectElement;
const sigmaInput = document.getElementById("sigma") as HTMLInputElement;
const sigmaButton = document.getElementById("apply-sigma") as HTMLButtonElement;
const undoButton = document.getElementById("undo") as HTMLButtonElement;
const statusEl = document.getElementById("status") as HTMLElement;
const clustersEl = document.getElementById("clusters") as HTMLElement;

let mode: Mode = "tree";
let tf: Transform | null = null;
let dgPoints: DecisionGraphPoint[] = [];
let dragStart: [number, number] | null = null;
let dragCurrent: [number, number] | null = null;

function viewport(): Viewport {
	return { width: canvas.width, height: canvas.height, margin: 30 };
}

function setStatus(msg: string, isError = false): void {
	statusEl.textContent = msg;
	statusEl.className = isError ? "error" : "";
}

function describeClusters(): string {
	return `${view.clusterCount} cluster(s), ${view.undoDepth} cut(s), sigma=${view.sigma}`;
}

async function refreshDecisionGraph(): Promise<void> {
	dgPoints = await client.getDecisionGraph();
}

function redraw(): void {
	if (mode === "tree") {
		tf = drawTree(ctx, view, viewport());
	} else {
		tf = drawDecisionGraph(ctx, dgPoints, viewport(), view.box, view.rootOf);
		if (dragStart && dragCurrent) {
			ctx.strokeStyle = "#d22";
			ctx.setLineDash([3, 3]);
			ctx.strokeRect(dragStart[0], dragStart[1],
				dragCurrent[0] - dragStart[0], dragCurrent[1] - dragStart[1]);
			ctx.setLineDash([]);
		}
	}
	clustersEl.textContent = describeClusters();
}

function canvasPoint(ev: MouseEvent): [number, number] {
	const rect = canvas.getBoundingClientRect();
	return [ev.clientX - rect.left, ev.clientY - rect.top];
}

async function handleTreeClick(ev: MouseEvent): Promise<void> {
	if (!tf) return;
	const [x, y] = tf.toData(canvasPoint(ev));
	try {
		const res = await client.cutClick(x, y);
		view.applyServer(res.state);
		view.addCross(x, y);
		await refreshDecisionGraph();
		setStatus(`cut edge starting at point ${res.cut}`);
	} catch (err) {
		if (err instanceof ApiError) {
			setStatus(err.message.includes("no edges") ? "nothing to cut" : err.message, true);
		} else {
			throw err;
		}
	}
	redraw();
}

async function finishBoxSelect(): Promise<void> {
	if (!tf || !dragStart || !dragCurrent) return;
	const [p0, w0] = tf.toData(dragStart);
	const [p1, w1] = tf.toData(dragCurrent);
	dragStart = dragCurrent = null;
	const box = {
		pMin: Math.min(p0, p1),
		pMax: Math.max(p0, p1),
		wMin: Math.min(w0, w1),
		wMax: Math.max(w0, w1),
	};
	try {
		const res = await client.cutBox(box);
		view.applyServer(res.state);
		view.box = box;
		await refreshDecisionGraph();
		setStatus(res.cut.length
			? `cut ${res.cut.length} edge(s): ${res.cut.join(", ")}`
			: "empty selection, nothing cut");
	} catch (err) {
		if (err instanceof ApiError) setStatus(err.message, true);
		else throw err;
	}
	redraw();
}

async function handleUndo(): Promise<void> {
	try {
		const res = await client.undo();
		view.applyServer(res.state);
		view.crosses.pop();
		await refreshDecisionGraph();
		setStatus(`restored edge of point ${res.undone}`);
	} catch (err) {
		if (err instanceof ApiError) setStatus("nothing to undo", true);
		else throw err;
	}
	redraw();
}

async function handleSigma(): Promise<void> {
	const sigma = Number(sigmaInput.value);
	if (!(sigma > 0)) {
		setStatus("sigma must be positive", true);
		return;
	}
	try {
		const res = await client.setSigma(sigma);
		view.applyServer(res.state);
		view.crosses = [];
		view.box = null;
		await refreshDecisionGraph();
		setStatus(`rebuilt with sigma=${sigma}; cuts cleared`);
	} catch (err) {
		if (err instanceof ApiError) setStatus(err.message, true);
		else throw err;
	}
	redraw();
}

canvas.addEventListener("mousedown", (ev) => {
	if (mode === "dcc") {
		dragStart = canvasPoint(ev);
		dragCurrent = dragStart;
	}
});
canvas.addEventListener("mousemove", (ev) => {
	if (mode === "dcc" && dragStart) {
		dragCurrent = canvasPoint(ev);
		redraw();
	}
});
canvas.addEventListener("mouseup", (ev) => {
	if (mode === "tree") {
		void handleTreeClick(ev);
	} else {
		void finishBoxSelect();
	}
});
modeSelect.addEventListener("change", () => {
	mode = modeSelect.value as Mode;
	redraw();
});
undoButton.addEventListener("click", () => void handleUndo());
sigmaButton.addEventListener("click", () => void handleSigma());

async function start(): Promise<void> {
	const state = await client.getState();
	view.applyServer(state);
	await refreshDecisionGraph();
	sigmaInput.value = String(state.sigma);
	if (!state.coords) {
		mode = "dcc";
		modeSelect.value = "dcc";
		(modeSelect.querySelector('option[value="tree"]') as HTMLOptionElement).disabled = true;
		setStatus("no 2-D coordinates: tree view disabled, decision graph active");
	} else {
		setStatus("click beside an edge to cut it");
	}
	redraw();
}

void start();
