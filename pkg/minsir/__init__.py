from .utils import *
from .exceptions import *
from .models import *
from .special import *
from .fading import *
from .sir import *
from .evt import *
from .policy import *
from .montecarlo import *
from .config import PRESETS, RunConfig, load_config


__version__ = "0.1.0"
__author__ = 'enchance'
