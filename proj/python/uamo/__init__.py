from ._uamo import *  # noqa: F401,F403
from ._uamo import __version__, run  # noqa: F401
