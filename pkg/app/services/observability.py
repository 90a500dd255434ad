"""
Timing spans and resource usage for long computations
"""
# Module scope
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import psutil

logger = logging.getLogger(__name__)


@dataclass
class Span:
    name: str
    attrs: dict = field(default_factory=dict)
    started: float = 0.0
    elapsed: float = 0.0
    rss_mb: float = 0.0


def rss_mb() -> float:
    return psutil.Process().memory_info().rss / (1024 * 1024)


@contextmanager
def trace_operation(name: str, **attrs):
    span = Span(name, {k: str(v) for k, v in attrs.items()}, time.perf_counter())
    logger.info("start %s %s", name, " ".join(f"{k}={v}" for k, v in span.attrs.items()))
    try:
        yield span
    except Exception as e:
        logger.warning("%s failed after %.2fs: %s", name, time.perf_counter() - span.started, e)
        raise
    finally:
        span.elapsed = time.perf_counter() - span.started
        span.rss_mb = rss_mb()
    logger.info("done %s in %.2fs (rss %.1f MB)", name, span.elapsed, span.rss_mb)
