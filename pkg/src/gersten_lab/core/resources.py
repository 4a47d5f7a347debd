import logging
import os
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterator, Optional

from .errors import BudgetExceededError, InputError

try:
    import psutil

    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False

LOGGER = logging.getLogger(__name__)

THREADS_ENV = "GERSTEN_LAB_THREADS"
DEFAULT_BUDGET_BYTES = 2048 * 2**20


def thread_count() -> int:
    """Number of worker threads for per-degree parallel work.

    Reads ``GERSTEN_LAB_THREADS``; falls back to ``min(4, cpu_count)``.

    Raises:
        InputError: If the environment variable is not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, min(4, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError(f"{THREADS_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class ResourceBudget:
    """Upper bound on the bytes a single dense matrix may occupy."""

    max_bytes: int = DEFAULT_BUDGET_BYTES

    def __post_init__(self) -> None:
        if self.max_bytes <= 0:
            raise InputError("memory budget must be positive")

    @classmethod
    def from_megabytes(cls, megabytes: int) -> "ResourceBudget":
        return cls(max_bytes=int(megabytes) * 2**20)

    def check(self, degree: int, rows: int, cols: int, itemsize: int, what: str = "differential") -> None:
        """Raise when a rows x cols matrix of the given item size does not fit.

        Raises:
            BudgetExceededError: naming the degree that would overflow the budget.
        """
        required = rows * cols * itemsize
        if required > self.max_bytes:
            LOGGER.warning("%s in degree %d refused: %d bytes > %d", what, degree, required, self.max_bytes)
            raise BudgetExceededError(degree, required, self.max_bytes, what)
        LOGGER.debug("%s in degree %d: %dx%d (%d bytes)", what, degree, rows, cols, required)


DEFAULT_BUDGET = ResourceBudget()
_ACTIVE = [DEFAULT_BUDGET]


def active_budget() -> ResourceBudget:
    """The budget used when a computation is not handed one explicitly."""
    return _ACTIVE[-1]


@contextmanager
def budget_scope(budget: ResourceBudget) -> Iterator[ResourceBudget]:
    """Make ``budget`` the active budget inside a ``with`` block."""
    _ACTIVE.append(budget)
    try:
        yield budget
    finally:
        _ACTIVE.pop()


class MemoryMonitor:
    """Samples the resident set size of this process in a background thread.

    Without psutil the monitor is inert and reports no samples. ``active``
    records whether sampling was running, fixed when ``start`` is called.
    """

    def __init__(self, interval: float = 0.1):
        self.interval = interval
        self.samples: list[dict[str, Any]] = []
        self._start_time = time.time()
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self.active = False

    def start(self) -> "MemoryMonitor":
        if PSUTIL_AVAILABLE and self._thread is None:
            self.active = True
            self._start_time = time.time()
            self._thread = threading.Thread(target=self._collect, daemon=True)
            self._thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        if self._thread and self._thread.is_alive():
            self._thread.join(timeout=1.0)

    def __enter__(self) -> "MemoryMonitor":
        return self.start()

    def __exit__(self, *exc: object) -> None:
        self.stop()

    @property
    def peak_rss(self) -> Optional[int]:
        """Largest sampled RSS in bytes, or None when nothing was sampled."""
        if not self.samples:
            return None
        return max(int(s["rss"]) for s in self.samples)

    def summary(self) -> dict[str, Any]:
        return {"psutil": self.active, "samples": len(self.samples), "peak_rss": self.peak_rss}

    def _collect(self) -> None:
        process = psutil.Process()
        while not self._stop.is_set():
            try:
                info = process.memory_info()
                self.samples.append({"timestamp": time.time() - self._start_time, "rss": info.rss})
            except (psutil.NoSuchProcess, psutil.AccessDenied):
                break
            time.sleep(self.interval)
