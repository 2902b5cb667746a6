"""Live streaming service: NDJSON messages over a WebSocket.

Endpoints: ``GET /model`` returns the active expert model document;
``WS /stream`` broadcasts the session's messages.  Slow clients never
block the pipeline: their oldest queued messages are dropped and replaced
with a ``gap`` notice.
"""

from __future__ import annotations

import asyncio
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import EngineConfig
from .expert import ExpertModel
from .mocap import Recording
from .stream import Pipeline, SCHEMA_VERSION, StreamMessage

QUEUE_LIMIT = 512


@dataclass(eq=False)
class _Client:
    queue: deque = field(default_factory=deque)
    wakeup: asyncio.Event = field(default_factory=asyncio.Event)
    dropped: int = 0
    first_dropped_seq: int = 0


class Broadcaster:
    """Fan-out of an ordered message stream to any number of clients."""

    def __init__(self, limit: int = QUEUE_LIMIT):
        self.limit = limit
        self.clients: set[_Client] = set()
        self.finished = False

    def register(self) -> _Client:
        client = _Client()
        self.clients.add(client)
        return client

    def unregister(self, client: _Client) -> None:
        self.clients.discard(client)

    @property
    def client_count(self) -> int:
        return len(self.clients)

    def publish(self, msg: StreamMessage) -> None:
        for client in self.clients:
            if len(client.queue) >= self.limit:
                victim = client.queue.popleft()
                if client.dropped == 0:
                    client.first_dropped_seq = victim.seq
                client.dropped += 1
            client.queue.append(msg)
            client.wakeup.set()

    def close(self) -> None:
        self.finished = True
        for client in self.clients:
            client.wakeup.set()

    async def drain(self, client: _Client):
        """Yield messages for one client, inserting gap notices after drops."""
        while True:
            while not client.queue:
                if self.finished:
                    return
                client.wakeup.clear()
                await client.wakeup.wait()
            if client.dropped:
                yield StreamMessage(
                    kind="gap",
                    seq=client.first_dropped_seq,
                    payload={"dropped": client.dropped},
                )
                client.dropped = 0
            yield client.queue.popleft()


def create_app(
    recording: Recording,
    model: ExpertModel,
    cfg: EngineConfig | None = None,
    *,
    speed_factor: float = 1.0,
    session_id: str = "session",
    wait_clients: int = 0,
) -> FastAPI:
    """App that replays one recording through the pipeline and broadcasts it.

    ``wait_clients`` delays the replay until that many stream clients are
    connected (useful for tests and synchronized demos).
    """
    cfg = cfg or EngineConfig()
    hub = Broadcaster()

    async def _pump() -> None:
        while hub.client_count < wait_clients:
            await asyncio.sleep(0.005)
        pipeline = Pipeline(recording, model, cfg, session_id)
        prev_t = None
        for t, batch in pipeline.frame_batches():
            if prev_t is not None and t == t and t > prev_t:  # skip NaN stats batch
                await asyncio.sleep((t - prev_t) / speed_factor)
            if t == t:
                prev_t = t
            for msg in batch:
                hub.publish(msg)
            await asyncio.sleep(0)  # let senders drain
        hub.close()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(_pump())
        yield
        task.cancel()

    app = FastAPI(title="shortserve stream", lifespan=lifespan)
    app.state.hub = hub

    @app.get("/model")
    async def get_model() -> dict:
        return {"v": SCHEMA_VERSION, "model": model.to_dict()}

    @app.websocket("/stream")
    async def stream(ws: WebSocket) -> None:
        await ws.accept()
        client = hub.register()
        try:
            async for msg in hub.drain(client):
                await ws.send_text(msg.to_json())
            await ws.close()
        except (WebSocketDisconnect, RuntimeError):
            pass  # client went away; broadcast continues
        finally:
            hub.unregister(client)

    return app
