"""Create the voxel cache beside a model manifest and fill it.

Same as ``python -m src.cli cache-init``, runnable as a plain script.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import cache_init
from src.utils.log import configure_logging


if __name__ == "__main__":
    configure_logging()
    cache_init(prog_name="init_db.py")
