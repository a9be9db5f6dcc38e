"""Live feeds and paced file replay feeding the store.

The ingest pipeline is two threads around one bounded queue.  The
producer blocks when the queue is full, so a slow consumer applies
backpressure to the source instead of dropping lines; nothing is ever
discarded inside the pipeline.  The consumer decodes and writes in
batches so SQLite sees few large transactions rather than many tiny
ones.
"""

import random
import socket
import threading
import time
from dataclasses import dataclass, field
from queue import Empty, Queue
from typing import Iterable, Iterator

from .decoder import StreamDecoder, parse_tag_block
from .storage import IngestReport, StorageHandle

DEFAULT_QUEUE_SIZE = 10_000
DEFAULT_BATCH_SIZE = 4096
DEFAULT_FLUSH_INTERVAL = 5.0

_SENTINEL = None


@dataclass
class StreamStats:
    """Counters shared across pipeline threads; every update takes the lock.

    All counters are monotone while a pipeline runs, and
    messages_stored never exceeds messages_decoded (stored = decoded
    minus duplicates and coordinate-less reports).
    """

    lines_seen: int = 0
    lines_malformed: int = 0
    messages_decoded: int = 0
    messages_stored: int = 0
    fragments_expired: int = 0
    last_receipt: int = 0
    batches_flushed: int = 0
    reconnects: int = 0
    queue_peak: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, **deltas: int) -> None:
        with self._lock:
            for name, delta in deltas.items():
                setattr(self, name, getattr(self, name) + delta)

    def mark_receipt(self, ts: int | None = None) -> None:
        with self._lock:
            self.last_receipt = int(ts if ts is not None else time.time())

    def observe_queue(self, depth: int) -> None:
        with self._lock:
            if depth > self.queue_peak:
                self.queue_peak = depth

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "lines_seen": self.lines_seen,
                "lines_malformed": self.lines_malformed,
                "messages_decoded": self.messages_decoded,
                "messages_stored": self.messages_stored,
                "fragments_expired": self.fragments_expired,
                "last_receipt": self.last_receipt,
                "batches_flushed": self.batches_flushed,
                "reconnects": self.reconnects,
                "queue_peak": self.queue_peak,
            }


def backoff_delays(
    base: float = 1.0, cap: float = 60.0, rng: random.Random | None = None
) -> Iterator[float]:
    """Exponential reconnect delays with jitter, capped at `cap` seconds.

    Jitter keeps a fleet of clients from hammering a recovering server in
    lockstep: each delay is drawn from [half, full] of the nominal value.
    """
    rng = rng or random.Random()
    nominal = base
    while True:
        yield nominal * (0.5 + 0.5 * rng.random())
        nominal = min(nominal * 2.0, cap)


def connect_lines(
    host: str,
    port: int,
    *,
    stop: threading.Event | None = None,
    stats: StreamStats | None = None,
    backoff_base: float = 1.0,
    backoff_cap: float = 60.0,
    connect_timeout: float = 10.0,
    rng: random.Random | None = None,
) -> Iterator[str]:
    """Yield raw lines from a TCP feed, reconnecting forever.

    Connection failures never propagate; they count as reconnects and
    feed the backoff schedule, which resets after any successful
    connection.  Set the stop event to end the generator cleanly.
    """
    stop = stop or threading.Event()
    while not stop.is_set():
        delays = backoff_delays(backoff_base, backoff_cap, rng)
        try:
            with socket.create_connection((host, port), timeout=connect_timeout) as sock:
                sock.settimeout(1.0)
                buf = b""
                while not stop.is_set():
                    try:
                        chunk = sock.recv(65536)
                    except socket.timeout:
                        continue
                    if not chunk:
                        break  # server closed
                    buf += chunk
                    while b"\n" in buf:
                        raw, buf = buf.split(b"\n", 1)
                        yield raw.decode("latin-1")
        except OSError:
            pass
        if stop.is_set():
            return
        if stats is not None:
            stats.add(reconnects=1)
        stop.wait(next(delays))


def replay_lines(
    path: str,
    speed: float = 1.0,
    *,
    clock: str = "tagblock",
    interval: float = 0.0,
    stop: threading.Event | None = None,
) -> Iterator[str]:
    """Yield lines from a capture file at a controlled pace.

    clock="tagblock" reproduces the gaps between receiver timestamps
    divided by `speed`, falling back to `interval` for lines without a
    timestamp; clock="fixed_interval" spaces every line by
    interval/speed.  speed=inf drains as fast as possible either way.
    """
    if speed <= 0:
        raise ValueError("replay speed must be positive")
    if clock not in ("tagblock", "fixed_interval"):
        raise ValueError(f"unknown replay clock {clock!r}")
    stop = stop or threading.Event()
    drain = speed == float("inf")
    wall_start = ts_start = None
    with open(path, encoding="latin-1") as fo:
        for line in fo:
            if stop.is_set():
                return
            line = line.rstrip("\r\n")
            if not line:
                continue
            if not drain:
                delay = 0.0
                if clock == "tagblock":
                    ts = None
                    try:
                        block, _rest = parse_tag_block(line)
                        if block is not None:
                            ts = block.receiver_timestamp
                    except Exception:
                        ts = None
                    if ts is None:
                        delay = interval / speed
                    elif ts_start is None:
                        ts_start, wall_start = ts, time.monotonic()
                    else:
                        target = wall_start + (ts - ts_start) / speed
                        delay = target - time.monotonic()
                else:
                    delay = interval / speed
                if delay > 0 and stop.wait(delay):
                    return
            yield line


def iter_file_lines(path: str) -> Iterator[str]:
    with open(path, encoding="latin-1") as fo:
        for line in fo:
            yield line.rstrip("\r\n")


def run_pipeline(
    lines: Iterable[str],
    handle: StorageHandle,
    *,
    queue_size: int = DEFAULT_QUEUE_SIZE,
    batch_size: int = DEFAULT_BATCH_SIZE,
    flush_interval: float = DEFAULT_FLUSH_INTERVAL,
    stats: StreamStats | None = None,
    stop: threading.Event | None = None,
    default_ts: int | None = None,
) -> IngestReport:
    """Pump raw lines through decode and into the store.

    Producer thread feeds a bounded queue (blocking put: backpressure,
    never loss); this thread decodes and flushes whenever a batch fills
    or the flush interval elapses with data pending.  Returns the merged
    ingest report once the source is exhausted or stop is set.
    """
    stats = stats or StreamStats()
    stop = stop or threading.Event()
    q: Queue = Queue(maxsize=queue_size)

    def produce() -> None:
        try:
            for line in lines:
                if stop.is_set():
                    break
                q.put(line)
                stats.add(lines_seen=1)
                stats.mark_receipt()
                stats.observe_queue(q.qsize())
        finally:
            q.put(_SENTINEL)

    producer = threading.Thread(target=produce, name="line-producer", daemon=True)
    producer.start()

    decoder = StreamDecoder()
    seen_malformed = seen_decoded = seen_expired = 0
    report = IngestReport()
    batch: list = []
    last_flush = time.monotonic()

    def sync_decoder_stats() -> None:
        nonlocal seen_malformed, seen_decoded, seen_expired
        stats.add(
            lines_malformed=decoder.stats.lines_malformed - seen_malformed,
            messages_decoded=decoder.stats.messages_decoded - seen_decoded,
            fragments_expired=decoder.assembler.fragments_expired - seen_expired,
        )
        seen_malformed = decoder.stats.lines_malformed
        seen_decoded = decoder.stats.messages_decoded
        seen_expired = decoder.assembler.fragments_expired

    def flush() -> None:
        nonlocal last_flush
        if batch:
            part = handle.insert_messages(batch)
            report.dynamic_rows += part.dynamic_rows
            report.static_rows += part.static_rows
            report.duplicates_skipped += part.duplicates_skipped
            report.unsupported_skipped += part.unsupported_skipped
            stats.add(
                messages_stored=part.dynamic_rows + part.static_rows,
                batches_flushed=1,
            )
            batch.clear()
        last_flush = time.monotonic()

    done = False
    while not done:
        timeout = max(0.05, flush_interval - (time.monotonic() - last_flush))
        try:
            item = q.get(timeout=timeout)
        except Empty:
            flush()
            continue
        if item is _SENTINEL:
            done = True
        else:
            msg = decoder.feed_line(item, default_ts=default_ts)
            sync_decoder_stats()
            if msg is not None:
                batch.append(msg)
            if len(batch) >= batch_size:
                flush()
        if time.monotonic() - last_flush >= flush_interval:
            flush()

    flush()  # incomplete fragment groups cannot decode; only flush the batch
    producer.join(timeout=5.0)
    return report


__all__ = [
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_FLUSH_INTERVAL",
    "DEFAULT_QUEUE_SIZE",
    "StreamStats",
    "backoff_delays",
    "connect_lines",
    "iter_file_lines",
    "replay_lines",
    "run_pipeline",
]
