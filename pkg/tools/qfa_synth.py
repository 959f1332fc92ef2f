#!/usr/bin/env python3
"""
qfa_synth command-line entry point

Usage:
    qfa_synth.py [--config FILE] [-v] <command> [options]

Run `qfa_synth.py --help` for the command list and examples.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from qfasynth.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
