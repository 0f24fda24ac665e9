from .boot import BootContext, boot
from .lifecycle import shutdown
