import sys

from polymix.cli import main

sys.exit(main())
