from .recall import *
from .experiment import *
from .sweep import *
from .reports import *
