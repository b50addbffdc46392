"""HTTP and WebSocket service exposing sessions to UIs and scripts.

Sessions run on their own threads; handlers here only relay control calls
and bridge the session listener callbacks into per-connection asyncio
queues.  All validation failures surface as 400 with a message, unknown
references as 404, illegal state transitions as 409.
"""

from __future__ import annotations

import asyncio
import json
import uuid
from pathlib import Path

from fastapi import Body, FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from antsteer.acs import AcsParams
from antsteer.instance import Instance, ParseError, list_bundled, load_bundled, parse_tsplib
from antsteer.session import FINISHED, PAUSED, Session, SessionError
from antsteer.steering import SteeringError
from antsteer import wire


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(data_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="antsteer", docs_url=None, redoc_url=None)
    app.state.data_dir = Path(data_dir) if data_dir else None
    app.state.sessions: dict[str, Session] = {}
    app.state.instances: dict[str, Instance] = {
        name: load_bundled(name) for name in list_bundled()}

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, str(exc.errors()))

    def get_session(session_id: str) -> Session:
        session = app.state.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    # -- instances ----------------------------------------------------------

    @app.get("/instances")
    def list_instances():
        items = [{"name": inst.name, "dimension": inst.n,
                  "edge_weight_type": inst.edge_weight_type}
                 for inst in app.state.instances.values()]
        items.sort(key=lambda it: it["name"])
        return {"instances": items}

    @app.post("/instances", status_code=201)
    def upload_instance(body: dict = Body(...)):
        text = body.get("tsplib")
        if not isinstance(text, str) or not text.strip():
            return _error(400, "field 'tsplib' must hold TSPLIB text")
        try:
            inst = parse_tsplib(text, name_hint=str(body.get("name", "")))
        except ParseError as exc:
            return _error(400, f"tsplib: {exc}")
        if inst.name in app.state.instances:
            return _error(409, f"instance {inst.name!r} already registered")
        app.state.instances[inst.name] = inst
        if app.state.data_dir is not None:
            folder = app.state.data_dir / "instances"
            folder.mkdir(parents=True, exist_ok=True)
            (folder / f"{inst.name}.tsp").write_text(text)
        return {"name": inst.name, "dimension": inst.n}

    # -- sessions -----------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session_endpoint(body: dict = Body(...)):
        ref = body.get("instance_ref")
        text = body.get("tsplib")
        if (ref is None) == (text is None):
            return _error(400, "exactly one of 'instance_ref' or 'tsplib' required")
        if ref is not None:
            instance = app.state.instances.get(ref)
            if instance is None:
                return _error(404, f"unknown instance {ref!r}")
        else:
            try:
                instance = parse_tsplib(text)
            except ParseError as exc:
                return _error(400, f"tsplib: {exc}")
        try:
            params = AcsParams.from_doc(body.get("params", {}))
            hif = float(body.get("hif", 0.0))
            session_id = uuid.uuid4().hex[:12]
            persist_dir = (app.state.data_dir / "sessions" / session_id
                           if app.state.data_dir is not None else None)
            session = Session(instance, params, initial_hif=hif,
                              session_id=session_id, persist_dir=persist_dir)
        except (ValueError, TypeError) as exc:
            return _error(400, str(exc))
        app.state.sessions[session.id] = session
        return {"session_id": session.id, "status": session.status}

    @app.get("/sessions/{session_id}")
    def get_snapshot(session_id: str):
        try:
            session = get_session(session_id)
        except KeyError:
            return _error(404, f"unknown session {session_id!r}")
        snapshot = session.snapshot()
        wire.validate_snapshot(snapshot)
        return snapshot

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        try:
            session = get_session(session_id)
        except KeyError:
            return _error(404, f"unknown session {session_id!r}")
        try:
            return session.result_doc()
        except SessionError as exc:
            return _error(409, str(exc))

    def apply_control(session: Session, body: dict) -> dict:
        action = body.get("action")
        if action == "start":
            session.start()
            return {"status": session.status}
        if action == "pause":
            return {"status": session.pause(wait=bool(body.get("wait", True)))}
        if action == "resume":
            session.resume()
            return {"status": session.status}
        if action == "steering_update":
            update = body.get("update")
            if not isinstance(update, dict):
                raise SteeringError("field 'update' must be an object")
            return {"version": session.apply_steering_update(update)}
        if action == "compare":
            return session.compare_with_optimal(force=bool(body.get("force", False)))
        raise ValueError(f"unknown action {action!r}")

    @app.post("/sessions/{session_id}/control")
    def control(session_id: str, body: dict = Body(...)):
        try:
            session = get_session(session_id)
        except KeyError:
            return _error(404, f"unknown session {session_id!r}")
        try:
            return apply_control(session, body)
        except SessionError as exc:
            return JSONResponse({"error": str(exc), "status": session.status},
                                status_code=409)
        except (SteeringError, ValueError) as exc:
            return _error(400, str(exc))

    # -- live stream --------------------------------------------------------

    @app.websocket("/sessions/{session_id}/live")
    async def live(websocket: WebSocket, session_id: str):
        await websocket.accept()
        seq = 0

        async def send(kind: str, payload: dict) -> None:
            nonlocal seq
            frame = wire.WireMessage(kind, session_id, payload, seq).to_doc()
            seq += 1
            await websocket.send_text(json.dumps(frame, sort_keys=True))

        session = app.state.sessions.get(session_id)
        if session is None:
            await send(wire.ERROR, {"error": f"unknown session {session_id!r}"})
            await websocket.close()
            return

        async def send_snapshot() -> None:
            snapshot = await asyncio.to_thread(session.snapshot)
            wire.validate_snapshot(snapshot)
            await send(wire.SNAPSHOT, snapshot)

        await send_snapshot()
        if session.status == FINISHED:
            await websocket.close()
            return

        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()

        def listener(kind: str, payload) -> None:
            loop.call_soon_threadsafe(queue.put_nowait, (kind, payload))

        session.add_listener(listener)
        recv_task = asyncio.create_task(websocket.receive_json())
        queue_task = asyncio.create_task(queue.get())
        try:
            while True:
                done, _ = await asyncio.wait({recv_task, queue_task},
                                             return_when=asyncio.FIRST_COMPLETED)
                if recv_task in done:
                    try:
                        frame = recv_task.result()
                    except (WebSocketDisconnect, RuntimeError):
                        break
                    try:
                        result = await asyncio.to_thread(
                            apply_control, session, frame)
                        if frame.get("action") == "steering_update":
                            await send(wire.STEERING_ACK, result)
                        elif frame.get("action") == "compare":
                            await send_snapshot()
                        # pause/resume acknowledge through status snapshots
                    except (SessionError, SteeringError, ValueError) as exc:
                        await send(wire.ERROR, {"error": str(exc)})
                    recv_task = asyncio.create_task(websocket.receive_json())
                if queue_task in done:
                    kind, payload = queue_task.result()
                    if kind == "event":
                        await send(wire.EVENT, payload)
                    elif kind == "status" and payload in (PAUSED, FINISHED):
                        await send_snapshot()
                        if payload == FINISHED:
                            break
                    queue_task = asyncio.create_task(queue.get())
        finally:
            session.remove_listener(listener)
            recv_task.cancel()
            queue_task.cancel()
            try:
                await websocket.close()
            except RuntimeError:
                pass

    return app
