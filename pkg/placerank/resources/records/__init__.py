from .validator import *
from .submapdb import *
from .queryseq import *
from .results import *
