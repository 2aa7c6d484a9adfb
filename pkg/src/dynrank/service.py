"""HTTP moderation service.

Each session is backed by an append-only event log (one JSON object per
line) on disk; replaying the log rebuilds the exact session state, so a
restart loses nothing. Mutations per session are serialized by an asyncio
lock and bump a sequence number; reads serve the cached state and the SSE
stream pushes a ranking payload whenever the sequence number moves.
Previews are read-only and never logged.
"""

from __future__ import annotations

import asyncio
import json
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from dynrank.errors import (
    AlreadyImplementedError,
    DepthViolationError,
    DynrankError,
    ProfileError,
    SessionError,
    UnknownCandidateError,
)
from dynrank.model import ApprovalProfile
from dynrank.rules import RULE_IDS
from dynrank.session import (
    SessionState,
    implement,
    new_session,
    preview,
    trajectory_from_session,
    trajectory_to_dict,
    update_profile,
)

DEFAULT_RULE = "dyn-phragmen"


class LiveSession:
    """In-memory runtime of one session plus its log file."""

    def __init__(self, session_id: str, rule: str, h: Optional[int], log_path: Path):
        self.session_id = session_id
        self.rule = rule
        self.h = h
        self.log_path = log_path
        self.candidates: list = []  # arrival order = priority order
        self.ballots: dict = {}  # voter token -> set of names, join order = voter order
        self.state: SessionState = new_session(ApprovalProfile(), rule, h)
        self.seq = 0
        self.lock = asyncio.Lock()
        self.changed = asyncio.Condition()

    # -- state transitions (callers hold the lock and persist the event) --

    def _profile(self) -> ApprovalProfile:
        return ApprovalProfile(self.candidates, [sorted(b) for b in self.ballots.values()])

    def apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "candidate":
            name = event["name"]
            if name in self.candidates:
                raise ProfileError(f"candidate {name!r} already submitted")
            self.candidates.append(name)
            self.state = update_profile(self.state, self._profile())
        elif kind == "vote":
            candidate = event["candidate"]
            if candidate not in self.candidates:
                raise UnknownCandidateError(f"unknown candidate: {candidate!r}")
            ballot = self.ballots.setdefault(event["voter"], set())
            if event["action"] == "approve":
                ballot.add(candidate)
            elif event["action"] == "retract":
                ballot.discard(candidate)
            else:
                raise ProfileError(f"unknown vote action: {event['action']!r}")
            self.state = update_profile(self.state, self._profile())
        elif kind == "implement":
            self.state = implement(self.state, event["candidate"])
        else:
            raise ProfileError(f"unknown event type: {kind!r}")
        self.seq += 1

    def ranking_payload(self) -> dict:
        profile = self.state.profile
        return {
            "session": self.session_id,
            "rule": self.rule,
            "h": self.h,
            "seq": self.seq,
            "implemented": list(self.state.implemented),
            "ranking": [
                {
                    "name": name,
                    "position": pos,
                    "approvals": len(profile.supporter_indices(name)),
                }
                for pos, name in enumerate(self.state.ranking, start=1)
            ],
        }


class SessionStore:
    """All live sessions, restored from the data directory on startup."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.sessions: dict = {}
        for log_path in sorted(self.data_dir.glob("*.ndjson")):
            session = self._replay(log_path)
            self.sessions[session.session_id] = session

    def _replay(self, log_path: Path) -> LiveSession:
        with open(log_path, "r", encoding="utf-8") as f:
            events = [json.loads(line) for line in f if line.strip()]
        head = events[0]
        session = LiveSession(head["session"], head["rule"], head.get("h"), log_path)
        for event in events[1:]:
            session.apply(event)
        return session

    def create(self, rule: str, h: Optional[int], candidates) -> LiveSession:
        candidates = list(candidates or ())
        if len(set(candidates)) != len(candidates):
            raise ProfileError("initial candidate list contains duplicates")
        session_id = uuid.uuid4().hex[:12]
        log_path = self.data_dir / f"{session_id}.ndjson"
        session = LiveSession(session_id, rule, h, log_path)
        self._append(session, {"type": "create", "session": session_id, "rule": rule, "h": h})
        for name in candidates:
            event = {"type": "candidate", "name": name}
            session.apply(event)
            self._append(session, event)
        self.sessions[session_id] = session
        return session

    def _append(self, session: LiveSession, event: dict) -> None:
        with open(session.log_path, "a", encoding="utf-8") as f:
            f.write(json.dumps(event) + "\n")

    def record(self, session: LiveSession, event: dict) -> None:
        """Apply an event and persist it; only reached if apply succeeds."""
        session.apply(event)
        self._append(session, event)

    def get(self, session_id: str) -> LiveSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}") from None


class CreateSessionBody(BaseModel):
    rule: Optional[str] = None
    h: Optional[int] = None
    candidates: Optional[list] = None


class CandidateBody(BaseModel):
    name: str


class VoteBody(BaseModel):
    candidate: str
    action: str = "approve"


class ImplementBody(BaseModel):
    candidate: str


def _http_error(exc: DynrankError) -> HTTPException:
    if isinstance(exc, UnknownCandidateError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (AlreadyImplementedError, DepthViolationError, SessionError)):
        return HTTPException(status_code=409, detail=str(exc))
    return HTTPException(status_code=400, detail=str(exc))


def create_app(data_dir, default_rule: str = DEFAULT_RULE) -> FastAPI:
    app = FastAPI(title="dynrank moderation service")
    store = SessionStore(data_dir)
    app.state.store = store

    async def _mutate(session: LiveSession, event: dict) -> dict:
        async with session.lock:
            try:
                store.record(session, event)
            except DynrankError as exc:
                raise _http_error(exc) from exc
            payload = session.ranking_payload()
        async with session.changed:
            session.changed.notify_all()
        return payload

    @app.post("/sessions", status_code=201)
    async def create_session(body: CreateSessionBody):
        rule = body.rule or default_rule
        if rule not in RULE_IDS:
            raise HTTPException(status_code=400, detail=f"unknown rule {rule!r}")
        if body.h is not None and body.h < 1:
            raise HTTPException(status_code=400, detail="h must be at least 1")
        try:
            session = store.create(rule, body.h, body.candidates)
        except DynrankError as exc:
            raise _http_error(exc) from exc
        return session.ranking_payload()

    @app.post("/sessions/{session_id}/candidates", status_code=201)
    async def submit_candidate(session_id: str, body: CandidateBody):
        session = store.get(session_id)
        payload = await _mutate(session, {"type": "candidate", "name": body.name})
        return {
            "name": body.name,
            "priority": session.candidates.index(body.name),
            "seq": payload["seq"],
        }

    @app.put("/sessions/{session_id}/votes/{voter}")
    async def cast_vote(session_id: str, voter: str, body: VoteBody):
        session = store.get(session_id)
        event = {"type": "vote", "voter": voter, "candidate": body.candidate, "action": body.action}
        payload = await _mutate(session, event)
        return {"ok": True, "seq": payload["seq"]}

    @app.get("/sessions/{session_id}/ranking")
    async def get_ranking(session_id: str):
        return store.get(session_id).ranking_payload()

    @app.post("/sessions/{session_id}/implement")
    async def implement_candidate(session_id: str, body: ImplementBody):
        session = store.get(session_id)
        return await _mutate(session, {"type": "implement", "candidate": body.candidate})

    @app.get("/sessions/{session_id}/preview/{candidate}")
    async def preview_candidate(session_id: str, candidate: str):
        session = store.get(session_id)
        async with session.lock:
            try:
                hypothetical = preview(session.state, candidate)
            except DynrankError as exc:
                raise _http_error(exc) from exc
        return {"session": session_id, "candidate": candidate, "ranking": list(hypothetical)}

    @app.get("/sessions/{session_id}/history")
    async def get_history(session_id: str):
        session = store.get(session_id)
        async with session.lock:
            return trajectory_to_dict(trajectory_from_session(session.state))

    @app.get("/sessions/{session_id}/stream")
    async def stream(session_id: str, request: Request):
        session = store.get(session_id)

        async def events():
            last_seq = -1
            while True:
                if await request.is_disconnected():
                    return
                if session.seq != last_seq:
                    last_seq = session.seq
                    payload = session.ranking_payload()
                    yield f"event: ranking\ndata: {json.dumps(payload)}\n\n"
                async with session.changed:
                    try:
                        await asyncio.wait_for(session.changed.wait(), timeout=15.0)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"

        return StreamingResponse(events(), media_type="text/event-stream")

    return app
