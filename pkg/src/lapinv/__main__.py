import sys

from lapinv.cli import main

sys.exit(main())
