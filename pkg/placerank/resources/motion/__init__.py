from .pose import *
from .noise import *
from .dead_reckoning import *
