import sys
from pathlib import Path

# make tests/oracles.py and fixtures importable regardless of invocation dir
sys.path.insert(0, str(Path(__file__).parent))
