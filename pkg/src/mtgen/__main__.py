import sys

from mtgen.cli import main

sys.exit(main())
