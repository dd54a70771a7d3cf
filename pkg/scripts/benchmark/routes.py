import argparse

from utils import timefunc

from qtomo.config import Config
from qtomo.lib.grid import make_axis
from qtomo.services import fidelity, states, tomography, transforms


def run_benchmark(extent: float, count: int, angles: int, threads: int, iterations: int):
    axis = make_axis(extent, count)
    kernel = states.mix(
        [
            (0.5, states.pure_kernel(states.fock_state(1, axis))),
            (0.5, states.pure_kernel(states.coherent_state(1.0, axis))),
        ]
    )
    grid = tomography.uniform_angles(angles)

    cf = timefunc(transforms.char_from_kernel, kernel, iterations=iterations)
    w = timefunc(transforms.wigner_from_char, cf, iterations=iterations)

    tom = timefunc(tomography.tomogram_from_char, cf, grid, threads=threads, iterations=iterations)
    timefunc(tomography.tomogram_from_wigner, w, grid, threads=threads, iterations=iterations)
    timefunc(tomography.tomogram_from_rotated_kernel, kernel, grid, threads=threads, iterations=iterations)

    timefunc(tomography.kernel_from_tomogram, tom, iterations=iterations)
    timefunc(fidelity.transition_tomographic, tom, tom, iterations=iterations)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Time the tomogram routes")
    parser.add_argument("--extent", type=float, default=Config.default_extent)
    parser.add_argument("--count", type=int, default=Config.default_count)
    parser.add_argument("--angles", type=int, default=Config.default_angles)
    parser.add_argument("--threads", type=int, default=Config.default_concurrency)
    parser.add_argument("--iterations", type=int, default=3)
    args = parser.parse_args()

    run_benchmark(args.extent, args.count, args.angles, args.threads, args.iterations)
