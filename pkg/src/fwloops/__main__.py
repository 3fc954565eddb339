import sys

from fwloops.cli import main

sys.exit(main())
