"""HTTP review service: browse ranked candidates, record verdicts, run the
next bootstrap iteration.

All state lives in the bootstrap checkpoint; every mutation is checkpointed
atomically before the request is acknowledged, so an acknowledged verdict
survives a process restart.  Judgments are keyed on candidate text (the
dictionary is a set of names, not occurrences) and are locked while an
iteration is running.  Verdict overrides require an explicit flag and are
recorded in an append-only audit log next to the checkpoint.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .bootstrap import (
    PENDING,
    BootstrapConfig,
    BootstrapState,
    load_state,
    recorded_judge,
    run_iteration,
    save_state,
)
from .corpus import load_corpus_file
from .evaluate import AnswerSet
from .lexicon import save_lexicon_file
from .ngram import bigram_text
from .scan import format_pool_tsv

logger = logging.getLogger(__name__)

SNIPPET_MARGIN = 20


class JudgmentIn(BaseModel):
    text: str
    verdict: Literal["ACCEPT", "REJECT"]
    override: bool = False


class StateStore:
    """Single-writer wrapper around a checkpoint file plus its corpus."""

    def __init__(
        self,
        state_path,
        corpus,
        config: BootstrapConfig | None = None,
        answers: AnswerSet | None = None,
    ):
        self.state_path = state_path
        state, stored_config = load_state(state_path)
        self.state: BootstrapState = state
        self.config = config or stored_config or BootstrapConfig()
        self.corpus = corpus
        self.answers = answers
        self.bodies = {a.id: a.body for a in corpus}
        self.lock = threading.RLock()
        self.running = False
        self.last_error: str | None = None
        self.audit_path = f"{state_path}.audit.jsonl"

    def checkpoint(self) -> None:
        save_state(self.state, self.state_path, config=self.config)

    def _audit(self, entry: dict) -> None:
        entry = {"at": time.strftime("%Y-%m-%dT%H:%M:%S"), **entry}
        with open(self.audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")

    def snippet(self, cand) -> str:
        body = self.bodies.get(cand.article_id, "")
        lo = max(0, cand.start - SNIPPET_MARGIN)
        hi = min(len(body), cand.start + len(cand.text) + SNIPPET_MARGIN)
        return body[lo:hi]

    def review_items(self, status: str | None, iteration: int | None,
                     offset: int, limit: int) -> dict:
        with self.lock:
            items = []
            for rank, cand in enumerate(self.state.pool.ranked(), start=1):
                verdict = self.state.verdict(cand.text)
                if status and status != "all" and verdict.lower() != status.lower():
                    continue
                if iteration is not None and cand.iteration != iteration:
                    continue
                items.append((rank, cand, verdict))
            page = items[offset : offset + limit]
            return {
                "total": len(items),
                "offset": offset,
                "items": [
                    {
                        "rank": rank,
                        "score": cand.score,
                        "text": cand.text,
                        "left": bigram_text(cand.left),
                        "right": bigram_text(cand.right),
                        "snippet": self.snippet(cand),
                        "verdict": verdict,
                        "iteration": cand.iteration,
                        "article_id": cand.article_id,
                        "offset": cand.start,
                    }
                    for rank, cand, verdict in page
                ],
            }

    def record_judgment(self, req: JudgmentIn) -> dict:
        with self.lock:
            if self.running:
                raise HTTPException(409, "iteration running; judgments are locked")
            if req.text not in self.state.pool:
                raise HTTPException(404, f"{req.text!r} is not in the candidate pool")
            current = self.state.verdict(req.text)
            if current == req.verdict:
                return {"text": req.text, "verdict": current, "changed": False}
            if current != PENDING and not req.override:
                raise HTTPException(
                    409, f"{req.text!r} already judged {current}; set override to change"
                )
            self.state.judgments[req.text] = req.verdict
            if current != PENDING:
                self._audit({"text": req.text, "from": current, "to": req.verdict})
            self.checkpoint()
            return {"text": req.text, "verdict": req.verdict, "changed": True}

    def start_iteration(self) -> dict:
        with self.lock:
            if self.running:
                raise HTTPException(409, "an iteration is already running")
            self.running = True
            self.last_error = None
            snapshot = self.state
        thread = threading.Thread(target=self._run_iteration, args=(snapshot,), daemon=True)
        thread.start()
        return {"status": "started", "iteration": snapshot.iteration + 1}

    def _run_iteration(self, snapshot: BootstrapState) -> None:
        try:
            judge = recorded_judge(dict(snapshot.judgments))
            new_state = run_iteration(snapshot, self.corpus, judge, self.config,
                                      answers=self.answers)
            with self.lock:
                self.state = new_state
                self.checkpoint()
        except Exception as exc:  # surfaced via /api/status
            logger.exception("iteration failed")
            with self.lock:
                self.last_error = str(exc)
        finally:
            with self.lock:
                self.running = False

    def status(self) -> dict:
        with self.lock:
            out = {
                "iteration": self.state.iteration,
                "running": self.running,
                "halted": self.state.halted,
                "error": self.last_error,
                "generation": self.state.lexicon.generation,
                "answers_loaded": self.answers is not None,
                "config": self.config.to_dict(),
            }
            out.update(self.state.counts())
            return out


def create_app(store: StateStore, ui_dir=None) -> FastAPI:
    app = FastAPI(title="journex review service")

    @app.get("/api/status")
    def status():
        return store.status()

    @app.get("/api/candidates")
    def candidates(
        status: str | None = Query(default=None),
        iteration: int | None = Query(default=None),
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=50, ge=1, le=1000),
    ):
        return store.review_items(status, iteration, offset, limit)

    @app.post("/api/judgments")
    def judge(req: JudgmentIn):
        return store.record_judgment(req)

    @app.post("/api/iterations")
    def iterate():
        return store.start_iteration()

    @app.get("/api/metrics")
    def metrics():
        with store.lock:
            return {"history": store.state.history}

    @app.get("/api/dictionary")
    def dictionary(format: str | None = None):
        with store.lock:
            entries = store.state.lexicon.sorted_entries()
            if format == "text":
                return PlainTextResponse("".join(e + "\n" for e in entries))
            return {
                "entries": entries,
                "generation": store.state.lexicon.generation,
                "seeds": sorted(store.state.seeds),
            }

    @app.get("/api/export/pool.tsv")
    def export_pool():
        with store.lock:
            return PlainTextResponse(
                format_pool_tsv(store.state.pool.ranked()),
                media_type="text/tab-separated-values",
            )

    @app.get("/api/export/lexicon.txt")
    def export_lexicon():
        with store.lock:
            entries = store.state.lexicon.sorted_entries()
        return PlainTextResponse("".join(e + "\n" for e in entries))

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def serve(state_path, corpus_path, port: int = 8400, host: str = "127.0.0.1",
          answers_path=None, ui_dir=None) -> None:
    import uvicorn

    corpus = load_corpus_file(corpus_path, strict=False)
    answers = None
    if answers_path:
        with open(answers_path, encoding="utf-8") as fh:
            names = {line.strip() for line in fh if line.strip()}
        answers = AnswerSet(frozenset(names), case_insensitive=False)
    store = StateStore(state_path, corpus, answers=answers)
    app = create_app(store, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


def export_lexicon_file(state_path, out_path) -> None:
    """CLI-equivalent export used to compare service and headless runs."""
    state, _ = load_state(state_path)
    save_lexicon_file(state.lexicon, out_path)
