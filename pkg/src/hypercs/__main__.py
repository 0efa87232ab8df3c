import sys

from hypercs.cli import main

sys.exit(main())
