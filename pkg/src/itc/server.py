"""Local HTTP service for the interactive cutting session.

One in-memory session per process, no auth: a single analyst drives it
from the browser UI or scripts. Mutations are serialized by a lock and
every mutating response embeds the full refreshed state, so the client's
next decision always sees current clusters.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .cutting import ClickPoint, cut_edge, decision_graph, identify_edge_by_click, \
    int_dcc_cut_select
from .data_model import Dataset, DistanceMatrix
from .intree import build_intree, undo_last_cut
from .potential import compute_potentials
from .rootfind import compute_tree_height, find_roots_doubling
from .serialize import TreeDocument, decision_graph_to_list, tree_to_dict

DEFAULT_PORT = 8642


@dataclass
class Session:
    ds: Dataset
    dm: DistanceMatrix
    sigma: float
    pf: object
    tree: object

    @classmethod
    def start(cls, ds: Dataset, dm: DistanceMatrix, sigma: float) -> "Session":
        pf = compute_potentials(dm, sigma)
        return cls(ds=ds, dm=dm, sigma=sigma, pf=pf, tree=build_intree(dm, pf))

    def rebuild(self, sigma: float) -> None:
        self.sigma = sigma
        self.pf = compute_potentials(self.dm, sigma)
        self.tree = build_intree(self.dm, self.pf)

    @property
    def coords(self) -> np.ndarray | None:
        return self.ds.coords_2d()

    def state(self) -> dict:
        doc = TreeDocument(tree=self.tree, sigma=self.sigma,
                           potentials=self.pf.p, coords=self.coords)
        payload = tree_to_dict(doc)
        a = find_roots_doubling(self.tree)
        payload["root_of"] = [int(r) + 1 for r in a.root_of]
        payload["cluster_count"] = a.cluster_count
        return payload


class ClickBody(BaseModel):
    x: float
    y: float


class BoxBody(BaseModel):
    pMin: float
    pMax: float
    wMin: float
    wMax: float


class EdgeBody(BaseModel):
    from_: int = Field(alias="from")  # 1-based


class ParamsBody(BaseModel):
    sigma: float


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="itc interactive session")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    lock = threading.Lock()

    def bad_request(msg: str):
        raise HTTPException(status_code=400, detail=msg)

    @app.get("/state")
    def get_state():
        return session.state()

    @app.get("/decision-graph")
    def get_decision_graph():
        return decision_graph_to_list(decision_graph(session.tree, session.pf))

    @app.get("/clusters")
    def get_clusters():
        a = find_roots_doubling(session.tree)
        return {
            "cluster_count": a.cluster_count,
            "root_of": [int(r) + 1 for r in a.root_of],
            "clusters": {str(int(r) + 1): [int(i) + 1 for i in members]
                         for r, members in sorted(a.clusters.items())},
            "height": compute_tree_height(session.tree),
            "rounds_used": a.rounds_used,
        }

    @app.post("/cut/click")
    def post_cut_click(body: ClickBody):
        with lock:
            if session.coords is None:
                bad_request("click cutting requires 2-D data; use /cut/box")
            try:
                vertex = identify_edge_by_click(session.tree, session.coords,
                                                ClickPoint(body.x, body.y))
                cut_edge(session.tree, vertex, "int-cut")
            except ValueError as exc:
                bad_request(str(exc))
            return {"cut": vertex + 1, "state": session.state()}

    @app.post("/cut/box")
    def post_cut_box(body: BoxBody):
        with lock:
            try:
                dg = decision_graph(session.tree, session.pf)
                selected = int_dcc_cut_select(dg, body.pMin, body.pMax,
                                              body.wMin, body.wMax)
                for v in selected:
                    cut_edge(session.tree, v, "int-dcc")
            except ValueError as exc:
                bad_request(str(exc))
            return {"cut": [v + 1 for v in selected], "state": session.state()}

    @app.post("/cut/edge")
    def post_cut_edge(body: EdgeBody):
        with lock:
            v = body.from_ - 1
            try:
                cut_edge(session.tree, v, "manual")
            except (ValueError, IndexError) as exc:
                bad_request(str(exc))
            return {"cut": body.from_, "state": session.state()}

    @app.post("/undo")
    def post_undo():
        with lock:
            try:
                vertex = undo_last_cut(session.tree)
            except ValueError as exc:
                bad_request(str(exc))
            return {"undone": vertex + 1, "state": session.state()}

    @app.post("/params")
    def post_params(body: ParamsBody):
        with lock:
            if not body.sigma > 0:
                bad_request("sigma must be positive")
            session.rebuild(float(body.sigma))
            return {"state": session.state()}

    return app


def serve(session: Session, port: int = DEFAULT_PORT, ui_dir: str | None = None) -> None:
    """Run the session server (blocking)."""
    import uvicorn

    app = create_app(session)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
