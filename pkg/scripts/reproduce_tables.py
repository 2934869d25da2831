"""Print both result tables for the bundled chemistry data, with timings."""
import time

from lotkafit.cli import build_tables, _tables_text
from lotkafit.data import LOTKA_CHEMISTRY, load_frequency_table
from importlib import resources


def main():
    raw = resources.files("lotkafit.datasets").joinpath(LOTKA_CHEMISTRY).read_bytes()
    table = load_frequency_table(raw)
    t0 = time.perf_counter()
    tables = build_tables(table, raw)
    elapsed = time.perf_counter() - t0
    print(_tables_text(tables), end="")
    print(f"\nall fits in {elapsed:.2f} s")


if __name__ == "__main__":
    main()
