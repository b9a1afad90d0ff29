/** Client-side mirror of the server session.
 *
 * The view never mutates optimistically: every mutation response (or a
 * fresh GET /state) is applied wholesale, and mirror() reconstructs the
 * exact wire payload so tests can prove the client never diverged.
 */

import type { BoxSelection, CutLogWire, ServerState } from "./api.js";

export interface ViewEdge {
	from: number;
	to: number;
	w: number;
	/** True for edges that exist only in the cut history. */
	cut: boolean;
}

export interface Cross {
	x: number;
	y: number;
}

/** Stable cluster color keyed by root index: survives recuts unchanged. */
export function colorForRoot(root: number): string {
	const hue = (root * 137) % 360;
	return `hsl(${hue}, 62%, 52%)`;
}

export class ViewState {
	n = 0;
	sigma = 0;
	coords: [number, number][] | null = null;
	potentials: number[] = [];
	edges: ViewEdge[] = [];
	roots: number[] = [];
	rootOf: number[] = [];
	cutLog: CutLogWire[] = [];
	clusterCount = 0;
	/** Click history in data coordinates; purely client-side. */
	crosses: Cross[] = [];
	/** Current decision-graph selection, if any. */
	box: BoxSelection | null = null;

	applyServer(state: ServerState): void {
		this.n = state.n;
		this.sigma = state.sigma;
		this.coords = state.coords;
		this.potentials = state.potentials;
		this.roots = [...state.roots];
		this.rootOf = [...state.root_of];
		this.cutLog = state.cut_log.map((c) => ({ ...c }));
		this.clusterCount = state.cluster_count;
		const live: ViewEdge[] = state.edges.map((e) => ({ ...e, cut: false }));
		const gone: ViewEdge[] = state.cut_log
			.filter((c) => !c.restored)
			.map((c) => ({ from: c.from, to: c.prev_to, w: c.prev_w, cut: true }));
		this.edges = [...live, ...gone].sort((a, b) => a.from - b.from);
	}

	get undoDepth(): number {
		return this.cutLog.filter((c) => !c.restored).length;
	}

	addCross(x: number, y: number): void {
		this.crosses.push({ x, y });
	}

	colorOf(point: number): string {
		return colorForRoot(this.rootOf[point - 1]);
	}

	/** Rebuild the wire payload from this view's own fields. */
	mirror(): ServerState {
		return {
			n: this.n,
			sigma: this.sigma,
			coords: this.coords,
			potentials: this.potentials,
			edges: this.edges
				.filter((e) => !e.cut)
				.map(({ from, to, w }) => ({ from, to, w })),
			roots: [...this.roots],
			cut_log: this.cutLog.map((c) => ({ ...c })),
			root_of: [...this.rootOf],
			cluster_count: this.clusterCount,
		};
	}
}
