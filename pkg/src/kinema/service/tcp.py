"""TCP front end for the live-session protocol: newline-delimited JSON,
UTF-8, one object per line, one independent session per connection.

Pacing is wall-clock at the configured rate, but frame timestamps are always
tick-count * dt, so a recorded session replays deterministically.  Turbo mode
drops the pacing (same values, as fast as the socket drains) for tests and
batch replay.
"""

from __future__ import annotations

import asyncio
import logging
import time
from typing import Optional

from kinema.errors import KinemaError
from kinema.service.session import Session, decode_line, encode_line

log = logging.getLogger(__name__)


async def _handle_connection(
    reader: asyncio.StreamReader,
    writer: asyncio.StreamWriter,
    rate: float,
    turbo: bool,
) -> None:
    session = Session(rate)
    inbox: asyncio.Queue = asyncio.Queue()
    closed = False

    async def read_lines() -> None:
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                if line.strip():
                    await inbox.put(line)
        finally:
            await inbox.put(None)

    reader_task = asyncio.create_task(read_lines())

    async def send(message: dict) -> None:
        writer.write(encode_line(message).encode("utf-8"))
        await writer.drain()

    async def apply_line(line: bytes) -> None:
        try:
            message = decode_line(line.decode("utf-8"))
        except KinemaError as exc:
            await send({"type": "error", "message": str(exc)})
            return
        for err in session.handle(message):
            await send(err)

    try:
        next_deadline = time.monotonic()
        while True:
            while not inbox.empty():
                line = inbox.get_nowait()
                if line is None:
                    return
                await apply_line(line)
            if not session.started:
                line = await inbox.get()
                if line is None:
                    return
                await apply_line(line)
                next_deadline = time.monotonic()
                continue
            frame = session.tick()
            if frame is not None:
                await send(frame)
            if turbo:
                await asyncio.sleep(0)
            else:
                next_deadline += session.dt
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    await asyncio.sleep(delay)
    except (ConnectionResetError, BrokenPipeError):
        pass
    finally:
        reader_task.cancel()
        try:
            writer.close()
            await writer.wait_closed()
        except (ConnectionResetError, BrokenPipeError):
            pass


async def serve_sessions(
    port: int,
    rate: float = 60.0,
    host: str = "127.0.0.1",
    turbo: bool = False,
    ready: Optional[asyncio.Event] = None,
) -> None:
    """Run the TCP session server until cancelled; OSError if the port is busy."""

    async def handler(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        peer = writer.get_extra_info("peername")
        log.info("session from %s", peer)
        await _handle_connection(reader, writer, rate, turbo)
        log.info("session from %s closed", peer)

    server = await asyncio.start_server(handler, host, port)
    if ready is not None:
        ready.set()
    async with server:
        await server.serve_forever()
