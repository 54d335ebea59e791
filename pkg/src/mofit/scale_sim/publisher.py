"""Ship readings to the service, surviving outages with an ordered queue."""

from __future__ import annotations

import time
from collections import deque


class TransportError(RuntimeError):
    """The service could not be reached (or answered with a server error)."""


def http_transport(base_url: str, timeout: float = 5.0):
    """POST JSON to the service; raises TransportError on connection trouble."""
    import requests

    def post(path: str, payload: dict) -> dict:
        try:
            resp = requests.post(base_url.rstrip("/") + path, json=payload,
                                 timeout=timeout)
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        if resp.status_code >= 500:
            raise TransportError(f"server error {resp.status_code}")
        if resp.status_code >= 400:
            raise ValueError(f"rejected ({resp.status_code}): {resp.text}")
        return resp.json()

    return post


class Publisher:
    """Monotone-timestamped reading publisher with bounded-backoff retries.

    Failed sends keep the reading at the head of a local queue, so order is
    preserved across outages; the next publish (or an explicit flush)
    retries the backlog first.
    """

    def __init__(self, device_id: str, post, max_retries: int = 4,
                 backoff_s: float = 0.2, clock=time.time, sleep=time.sleep):
        self.device_id = device_id
        self.post = post
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.clock = clock
        self.sleep = sleep
        self.queue: deque[dict] = deque()
        self._last_ts = 0.0

    def register(self) -> None:
        self.post("/scale/devices", {"device_id": self.device_id})

    def _stamp(self) -> float:
        ts = float(self.clock())
        if ts <= self._last_ts:
            ts = self._last_ts + 1e-3
        self._last_ts = ts
        return ts

    def publish(self, grams: float) -> bool:
        """Queue one reading and try to flush; False if backlog remains."""
        self.queue.append({"device_id": self.device_id, "grams": grams,
                           "timestamp": self._stamp()})
        return self.flush()

    def flush(self) -> bool:
        while self.queue:
            reading = self.queue[0]
            sent = False
            for attempt in range(self.max_retries):
                try:
                    self.post("/scale/readings", reading)
                    sent = True
                    break
                except TransportError:
                    if attempt + 1 < self.max_retries:
                        self.sleep(self.backoff_s * (2 ** attempt))
            if not sent:
                return False
            self.queue.popleft()
        return True
