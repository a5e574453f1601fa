# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
import sys

from robustht.cli import main

if __name__ == "__main__":
    sys.exit(main())
