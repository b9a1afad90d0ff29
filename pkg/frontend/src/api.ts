/** Typed client for the clustering session's HTTP API. */

export interface EdgeWire {
	from: number;
	to: number;
	w: number;
}

export interface CutLogWire {
	from: number;
	prev_to: number;
	prev_w: number;
	method: string;
	restored: boolean;
}

/** Full session state; indices are 1-based, as everywhere on the wire. */
export interface ServerState {
	n: number;
	sigma: number;
	coords: [number, number][] | null;
	potentials: number[];
	edges: EdgeWire[];
	roots: number[];
	cut_log: CutLogWire[];
	root_of: number[];
	cluster_count: number;
}

export interface DecisionGraphPoint {
	index: number;
	absP: number;
	/** Edge weight; null for roots (they have no outgoing edge). */
	w: number | null;
}

export interface ClustersInfo {
	cluster_count: number;
	root_of: number[];
	clusters: Record<string, number[]>;
	height: number;
	rounds_used: number;
}

export interface BoxSelection {
	pMin: number;
	pMax: number;
	wMin: number;
	wMax: number;
}

export class ApiError extends Error {
	constructor(readonly status: number, detail: string) {
		super(detail);
	}
}

async function parseOrThrow<T>(res: Response): Promise<T> {
	if (!res.ok) {
		let detail = res.statusText;
		try {
			const body = await res.json();
			if (body && typeof body.detail === "string") detail = body.detail;
		} catch {
			// keep the status text
		}
		throw new ApiError(res.status, detail);
	}
	return (await res.json()) as T;
}

export class ItcClient {
	constructor(readonly baseUrl: string = "") {}

	private get(path: string) {
		return fetch(this.baseUrl + path);
	}

	private post(path: string, body: unknown) {
		return fetch(this.baseUrl + path, {
			method: "POST",
			headers: { "Content-Type": "application/json" },
			body: JSON.stringify(body),
		});
	}

	async getState(): Promise<ServerState> {
		return parseOrThrow(await this.get("/state"));
	}

	async getDecisionGraph(): Promise<DecisionGraphPoint[]> {
		return parseOrThrow(await this.get("/decision-graph"));
	}

	async getClusters(): Promise<ClustersInfo> {
		return parseOrThrow(await this.get("/clusters"));
	}

	async cutClick(x: number, y: number): Promise<{ cut: number; state: ServerState }> {
		return parseOrThrow(await this.post("/cut/click", { x, y }));
	}

	async cutBox(box: BoxSelection): Promise<{ cut: number[]; state: ServerState }> {
		return parseOrThrow(await this.post("/cut/box", box));
	}

	async cutEdge(from: number): Promise<{ cut: number; state: ServerState }> {
		return parseOrThrow(await this.post("/cut/edge", { from }));
	}

	async undo(): Promise<{ undone: number; state: ServerState }> {
		return parseOrThrow(await this.post("/undo", {}));
	}

	async setSigma(sigma: number): Promise<{ state: ServerState }> {
		return parseOrThrow(await this.post("/params", { sigma }));
	}
}
