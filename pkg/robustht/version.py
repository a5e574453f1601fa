# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

ROBUSTHT_VERSION = "0.3.0"
OUTPUT_SCHEMA_VERSION = 1  # bumped when JSON/CSV artifact layout changes
