/** Headless replay of a scripted interactive session against the real
 * server: three clicks, one undo, one box selection. After every step the
 * client's mirrored state must equal a fresh GET /state, and each click
 * must cut exactly the edge the backend's angle rule designates (expected
 * vertices precomputed with the library on this committed fixture). */

import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ItcClient } from "../src/api.js";
import { ViewState } from "../src/state.js";
import { REPO_ROOT, RunningServer, startServer } from "./server_harness.js";

const FIXTURE = path.join(REPO_ROOT, "data", "t2d.csv");
const PORT = 8711;

// click script and the edge starts the angle rule picks for them, replayed
// sequentially (each click sees the previous cuts)
const CLICKS: Array<{ x: number; y: number; cuts: number }> = [
	{ x: 2.448, y: 3.959, cuts: 25 },
	{ x: 7.48, y: 3.977, cuts: 4 },
	{ x: 9.383, y: -0.056, cuts: 24 },
];
const BOX = { pMin: 0.0, pMax: 50.0, wMin: 0.877, wMax: 50.0 };
const BOX_CUTS = [44];

let server: RunningServer;
let client: ItcClient;
const view = new ViewState();

async function expectMirrorsServer(): Promise<void> {
	expect(view.mirror()).toEqual(await client.getState());
}

beforeAll(async () => {
	server = await startServer(FIXTURE, "1", PORT);
	client = new ItcClient(server.baseUrl);
}, 120_000);

afterAll(async () => {
	await server?.stop();
});

describe("scripted session replay", () => {
	it("loads the fixture into a single-cluster state", async () => {
		view.applyServer(await client.getState());
		expect(view.n).toBe(45);
		expect(view.clusterCount).toBe(1);
		expect(view.coords).not.toBeNull();
		expect(view.undoDepth).toBe(0);
		await expectMirrorsServer();
	});

	it("cuts the designated edge on each click", async () => {
		for (const [i, step] of CLICKS.entries()) {
			const res = await client.cutClick(step.x, step.y);
			expect(res.cut).toBe(step.cuts);
			view.applyServer(res.state);
			view.addCross(step.x, step.y);
			expect(view.clusterCount).toBe(i + 2);
			expect(view.undoDepth).toBe(i + 1);
			expect(view.crosses.length).toBe(i + 1);
			await expectMirrorsServer();
		}
		const cutEdges = view.edges.filter((e) => e.cut).map((e) => e.from);
		expect(cutEdges.sort((a, b) => a - b)).toEqual([4, 24, 25]);
	});

	it("undo restores the last cut edge", async () => {
		const res = await client.undo();
		expect(res.undone).toBe(CLICKS[2].cuts);
		view.applyServer(res.state);
		view.crosses.pop();
		expect(view.clusterCount).toBe(3);
		expect(view.undoDepth).toBe(2);
		await expectMirrorsServer();
	});

	it("box selection cuts the dominant-weight vertex", async () => {
		const res = await client.cutBox(BOX);
		expect(res.cut).toEqual(BOX_CUTS);
		view.applyServer(res.state);
		view.box = BOX;
		expect(view.clusterCount).toBe(4);
		await expectMirrorsServer();
	});

	it("cluster colors stay stable for unchanged roots", async () => {
		const rootBefore = [...view.rootOf];
		const colorBefore = Array.from({ length: view.n }, (_, i) => view.colorOf(i + 1));
		const res = await client.cutEdge(view.edges.find((e) => !e.cut)!.from);
		view.applyServer(res.state);
		let unchanged = 0;
		for (let p = 1; p <= view.n; p++) {
			if (view.rootOf[p - 1] === rootBefore[p - 1]) {
				expect(view.colorOf(p)).toBe(colorBefore[p - 1]);
				unchanged++;
			}
		}
		expect(unchanged).toBeGreaterThan(0);
		await expectMirrorsServer();
	});
});
