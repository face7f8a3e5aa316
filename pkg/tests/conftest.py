import sys
from pathlib import Path

# helpers such as tensor_oracle live next to the tests
sys.path.insert(0, str(Path(__file__).parent))
