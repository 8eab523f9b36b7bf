import sys

from geophase.cli import main

sys.exit(main())
