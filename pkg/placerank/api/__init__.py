from .adapter import *
from .single import *
from .stpe import *
from .pf_baseline import *
