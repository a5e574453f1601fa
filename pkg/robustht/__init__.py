# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

from ._error import *
from .dist import *
from .lfd import *
from .complexity import *
from .adversary import *
from .experiments import *
from .version import ROBUSTHT_VERSION as __version__
