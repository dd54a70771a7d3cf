import sys

from timeit import default_timer as timer


def timefunc(func, *args, iterations: int = 3, **kwargs):
    """Run `func` a few times and print the best wall time.

    Usage example:
        timefunc(tomogram_from_char, cf, angles, iterations=5)
    """
    elapsed = sys.maxsize
    result = None
    for _ in range(iterations):
        start = timer()
        result = func(*args, **kwargs)
        elapsed = min(timer() - start, elapsed)
    print("Best of {} {}(): {:.6f}s".format(iterations, func.__name__, elapsed))
    return result
