"""Adapters for external proposer/solver/selector endpoints.

An endpoint is any callable taking one JSON-serializable dict and returning
the parsed JSON response. The transport itself (HTTP client, subprocess,
test stub) is injected by the caller; this module owns the retry envelope
and response-schema validation. Builtin mode never touches any of this.
"""

from __future__ import annotations

import json
import logging
import subprocess
import time
from dataclasses import dataclass

from .errors import EmptyResponse, MalformedJson, TransportFailure
from .grid import Grid

logger = logging.getLogger(__name__)

# errors worth a second attempt; schema trouble from a sampled model is
# transient in the same way a dropped connection is
_RETRYABLE = (TransportFailure, MalformedJson, EmptyResponse)


@dataclass(frozen=True)
class RetryPolicy:
    """Bounded retries with exponential, capped backoff."""

    max_retries: int = 2
    base_delay: float = 0.5
    max_delay: float = 4.0

    def delay(self, attempt: int) -> float:
        return min(self.base_delay * (2 ** attempt), self.max_delay)


def call_with_retry(endpoint, payload: dict, policy: RetryPolicy | None = None, *, sleep=time.sleep):
    """Invoke `endpoint(payload)`, retrying retryable failures per policy."""
    policy = policy or RetryPolicy()
    last: Exception | None = None
    for attempt in range(policy.max_retries + 1):
        try:
            return endpoint(payload)
        except _RETRYABLE as err:
            last = err
            if attempt < policy.max_retries:
                pause = policy.delay(attempt)
                logger.warning("endpoint attempt %d failed (%s); retrying in %.2fs", attempt + 1, err, pause)
                sleep(pause)
    assert last is not None
    raise last


def with_retry(endpoint, policy: RetryPolicy | None = None, *, sleep=time.sleep):
    """Wrap an endpoint so every call goes through the retry envelope."""

    def wrapped(payload: dict):
        return call_with_retry(endpoint, payload, policy, sleep=sleep)

    return wrapped


def validate_grid_response(obj) -> list[list[int]]:
    """Check a solver response is one legal grid as lists; returns it."""
    if not isinstance(obj, list):
        raise MalformedJson("solver response must be a list of rows")
    Grid.from_lists(obj)  # full shape/range validation
    return obj


def validate_choice_response(obj, pool_size: int) -> int:
    """Check a selector response is one candidate index; returns it."""
    if isinstance(obj, dict):
        obj = obj.get("solution_id")
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise MalformedJson("selector response must be an integer solution id")
    if not 0 <= obj < pool_size:
        raise MalformedJson(f"solution id {obj} out of range for pool of {pool_size}")
    return obj


def make_solver(endpoint, policy: RetryPolicy | None = None, *, sleep=time.sleep):
    """Solver adapter: returns a callable payload -> validated grid lists."""

    def solve(payload: dict) -> list[list[int]]:
        return validate_grid_response(call_with_retry(endpoint, payload, policy, sleep=sleep))

    return solve


def make_selector(endpoint, policy: RetryPolicy | None = None, *, sleep=time.sleep):
    """Selector adapter: returns a callable (payload, pool_size) -> index."""

    def choose(payload: dict, pool_size: int) -> int:
        return validate_choice_response(
            call_with_retry(endpoint, payload, policy, sleep=sleep), pool_size
        )

    return choose


def subprocess_endpoint(cmd: str, *, timeout: float = 60.0):
    """Endpoint speaking JSON over stdin/stdout of a shell command.

    The command receives the request on stdin and must print exactly one
    JSON document. Lets the CLI talk to any external model wrapper without
    baking in a transport.
    """

    def call(payload: dict):
        try:
            proc = subprocess.run(
                cmd, shell=True, input=json.dumps(payload).encode(),
                capture_output=True, timeout=timeout,
            )
        except subprocess.TimeoutExpired as err:
            raise TransportFailure(f"endpoint timed out after {timeout}s") from err
        if proc.returncode != 0:
            raise TransportFailure(
                f"endpoint exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
            )
        try:
            return json.loads(proc.stdout.decode())
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise MalformedJson(f"endpoint wrote invalid JSON: {err}") from err

    return call
