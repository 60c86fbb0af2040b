import sys

from gueflux.cli import main

sys.exit(main())
