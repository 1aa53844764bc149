import sys

from slbt.cli import main

sys.exit(main())
