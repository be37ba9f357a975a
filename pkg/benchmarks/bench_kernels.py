"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--paths 1000000] [--repeat 3]
"""
import argparse
import timeit

from contlattice._backend import compiled_kernels, python_kernels


def cases(k, paths):
    return {
        "bessel_i_scaled nu=1 z=20 (series)": lambda: k.bessel_i_scaled(2, 20.0),
        "bessel_i_scaled nu=0 z=200 (asymptotic)": lambda: k.bessel_i_scaled(0, 200.0),
        "reduced_bessel_scaled n=1 y=50": lambda: k.reduced_bessel_scaled(1, 50.0),
        f"simulate_paths {paths} paths, lam t = 4": lambda: k.simulate_paths(1, 1.0, 2.0, 2.0, 0, paths),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--paths", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = [("python", python_kernels)]
    if compiled_kernels is not None:
        backends.append(("compiled", compiled_kernels))
    else:
        print("compiled extension not built; timing the Python kernels only")

    results = {}
    for label, k in backends:
        for name, fn in cases(k, args.paths).items():
            number = 1 if name.startswith("simulate") else 20000
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            results.setdefault(name, {})[label] = best

    width = max(map(len, results))
    print(f"{'kernel':<{width}}  {'python':>12}  {'compiled':>12}  {'speedup':>8}")
    for name, row in results.items():
        py = row["python"]
        comp = row.get("compiled")
        comp_s = f"{comp * 1e6:10.2f}us" if comp is not None else f"{'-':>12}"
        speed = f"{py / comp:7.1f}x" if comp else f"{'-':>8}"
        print(f"{name:<{width}}  {py * 1e6:10.2f}us  {comp_s}  {speed}")


if __name__ == "__main__":
    main()
