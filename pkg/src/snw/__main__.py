import sys

from snw.cli import main

sys.exit(main())
