"""Wire transports for the protocol session: WebSocket at /ws and stdio.

Both transports speak the same newline-delimited JSON messages (one JSON
object per WebSocket text frame / per stdio line); see docs/protocol.md.
"""

from __future__ import annotations

import asyncio
import json
import sys
import threading
from pathlib import Path
from typing import Optional, TextIO

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .prover import SearchConfig
from .session import Session


def build_app(cfg: Optional[SearchConfig] = None,
              static_dir: Optional[str] = None) -> FastAPI:
    """The ASGI app: /ws speaks the protocol, /healthz answers liveness, and
    an optional static directory (a built web client) is served at /."""
    app = FastAPI(title="muprolog service", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"ok": True}

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket) -> None:
        await websocket.accept()
        loop = asyncio.get_running_loop()
        outbox: asyncio.Queue = asyncio.Queue()

        def emit(frame: dict) -> None:
            # called from the derivation worker thread
            loop.call_soon_threadsafe(outbox.put_nowait, frame)

        async def writer() -> None:
            while True:
                frame = await outbox.get()
                await websocket.send_text(json.dumps(frame))

        session = Session(emit, cfg)
        writer_task = asyncio.create_task(writer())
        try:
            while True:
                text = await websocket.receive_text()
                # handlers never block: derivations run on their own thread
                session.handle_line(text)
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()
            await asyncio.get_running_loop().run_in_executor(None, session.close)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:
        @app.get("/")
        async def index() -> dict:
            return {"service": "muprolog", "websocket": "/ws"}

    return app


def serve_stdio(cfg: Optional[SearchConfig] = None,
                stdin: Optional[TextIO] = None,
                stdout: Optional[TextIO] = None) -> int:
    """One session over stdin/stdout, one JSON object per line. Returns when
    stdin closes."""
    inp = stdin if stdin is not None else sys.stdin
    out = stdout if stdout is not None else sys.stdout
    write_lock = threading.Lock()

    def emit(frame: dict) -> None:
        with write_lock:
            out.write(json.dumps(frame) + "\n")
            out.flush()

    session = Session(emit, cfg)
    try:
        for line in inp:
            session.handle_line(line)
    finally:
        session.close()
    return 0


def serve(port: Optional[int] = None, stdio: bool = False,
          cfg: Optional[SearchConfig] = None, host: str = "127.0.0.1",
          static_dir: Optional[str] = None) -> int:
    """Entry point behind `mup serve`: exactly one of --port / --stdio."""
    if stdio == (port is not None):
        raise ValueError("pass exactly one of port or stdio")
    if stdio:
        return serve_stdio(cfg)
    import uvicorn
    if static_dir is not None and not Path(static_dir).is_dir():
        raise ValueError(f"static directory {static_dir!r} does not exist")
    uvicorn.run(build_app(cfg, static_dir), host=host, port=port,
                log_level="warning")
    return 0
