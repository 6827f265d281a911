import sys

from surreal_dt.cli import main

sys.exit(main())
