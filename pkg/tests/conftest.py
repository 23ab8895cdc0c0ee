import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hypothesis import settings

settings.register_profile("ecgsym", deadline=None)
settings.load_profile("ecgsym")
