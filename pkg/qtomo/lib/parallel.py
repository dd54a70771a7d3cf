import concurrent.futures
from typing import Callable, List, Optional, Sequence, TypeVar

from ..config import Config
from .logger import SDKLogger
from .utils import ProgressBar

logger = SDKLogger.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    func: Callable[[T], R],
    items: Sequence[T],
    threads: Optional[int] = None,
    progress: Optional[ProgressBar] = None,
) -> List[R]:
    """
    Apply `func` to every item on a thread pool and return the results in
    input order, whatever order the workers finish in. Reductions over the
    result list therefore run in a fixed order for any thread count.

    :param func: Pure function of one item
    :param items: Work items, e.g. angles
    :param threads: Worker count, `Config.default_concurrency` by default; 1 runs inline
    :param progress: Optional progress bar updated once per finished item
    """
    threads = Config.default_concurrency if threads is None else int(threads)
    results: List[Optional[R]] = [None] * len(items)

    if threads <= 1 or len(items) <= 1:
        for index, item in enumerate(items):
            results[index] = func(item)
            if progress is not None:
                progress.update()
        return results

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        futures = {executor.submit(func, item): index for index, item in enumerate(items)}
        for future in concurrent.futures.as_completed(futures):
            try:
                results[futures[future]] = future.result()
            except Exception as e:
                logger.error(e, exc_info=1)
                raise
            if progress is not None:
                progress.update()

    return results
