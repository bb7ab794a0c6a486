import logging
from functools import wraps
from threading import Thread
from typing import Any, Callable, Iterable, List, Optional, Tuple

logger = logging.getLogger(__name__)


class ResultThread(Thread):
    """
    A thread that keeps the return value (or the exception) of its target.
    """

    def __init__(self, func: Callable, args: tuple, kwargs: dict, daemon: Optional[bool] = None):
        super().__init__(name=f"{func.__name__}-worker", daemon=daemon)
        self.func = func
        self.args = args
        self.kwargs = kwargs
        self._result: Any = None
        self._error: Optional[BaseException] = None

    def run(self) -> None:
        try:
            self._result = self.func(*self.args, **self.kwargs)
        except BaseException as err:  # noqa
            self._error = err

    def result(self, timeout: Optional[float] = None) -> Any:
        self.join(timeout)
        if self.is_alive():
            raise TimeoutError(f"{self.name} still running after {timeout=}")
        if self._error is not None:
            raise self._error
        return self._result


def in_separate_thread(daemon: Optional[bool] = None):
    """
    Runs the decorated function on a new thread per call.
    The call returns the started ResultThread; ``thread.result()`` waits for the value.

    :param daemon: A daemon thread (True) or not (False). If None, then its initial value is inherited
        from the creating thread.
    """

    def _decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs) -> ResultThread:
            thread = ResultThread(func=func, args=args, kwargs=kwargs, daemon=_daemon)
            thread.start()
            return thread

        return wrapper

    _daemon: Optional[bool] = None
    if callable(daemon):
        return _decorator(func=daemon)
    _daemon = daemon
    return _decorator


def collect_in_batches(threaded: Callable[..., ResultThread], calls: Iterable[Tuple], threads: int = 1) -> List[Any]:
    """
    Calls a function decorated with ``in_separate_thread`` once per argument tuple,
    with at most ``threads`` running at a time. Results come back in submission order.
    """
    calls = list(calls)
    width = max(1, threads)
    results: List[Any] = []
    for start in range(0, len(calls), width):
        running = [threaded(*args) for args in calls[start:start + width]]
        logger.debug(f"{start=} {len(running)=}")
        results.extend(thread.result() for thread in running)
    return results
