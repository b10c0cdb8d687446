import sys
from pathlib import Path

# render_fig.py lives one level up and is used as a standalone script
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
