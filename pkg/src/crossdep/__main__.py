import sys

from crossdep.cli import main

sys.exit(main())
