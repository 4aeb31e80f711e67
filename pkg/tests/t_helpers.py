import logging
import sys
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from holdring import main
from holdring.actions.digits import DigitString

GOLDEN_PATH = Path(__file__).parent / "golden"


def main_with_log(args, raise_on_error: bool = False) -> Tuple[int, str]:
    """Run main(), but capture everything that it prints and logs
    to the console into the returned string.
    """

    string_stream = StringIO()
    handler1 = logging.StreamHandler(string_stream)
    handler2 = logging.StreamHandler(stream=sys.stderr)
    handler1.setLevel(logging.INFO)
    handler2.setLevel(logging.INFO)
    root_logger = logging.getLogger()
    root_logger.addHandler(handler1)
    root_logger.addHandler(handler2)
    all_loggers = [logging.getLogger(name) for name in logging.root.manager.loggerDict]
    for lg in all_loggers:
        lg.setLevel(logging.DEBUG)
    printed = StringIO()
    try:
        with redirect_stdout(printed):
            exit_code = main(args)
        handler1.flush()
        handler2.flush()
        ret_str = printed.getvalue() + string_stream.getvalue()
        if raise_on_error and (exit_code != 0 or "Traceback" in ret_str):
            raise RuntimeError(
                f"An error was observed when calling main.  Arguments were:\nmain([{args}])\nFull log follows: -------\n"
                + ret_str
            )
        return exit_code, ret_str
    finally:
        root_logger.removeHandler(handler1)
        root_logger.removeHandler(handler2)


def read_golden(name: str) -> str:
    with open(GOLDEN_PATH / name, "rt") as fh:
        return fh.read()


def random_strings(n: int, count: int, max_degree: int, seed: int) -> List[DigitString]:
    """Seeded random digit strings over mu_{n,+} of degree <= max_degree (the empty string included)."""
    rng = np.random.default_rng(seed)
    strings = []
    for _ in range(count):
        length = int(rng.integers(0, max_degree + 2))
        picks = rng.integers(0, n + 1, size=length)
        strings.append(DigitString(n, tuple(None if v == 0 else int(v) - 1 for v in picks)))
    return strings


def ints(values: Sequence[int], n: int) -> DigitString:
    """Shorthand for integer-spelled strings with n <= 2."""
    return DigitString.from_ints(values, n)
