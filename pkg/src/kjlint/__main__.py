import sys

from kjlint.cli import main

sys.exit(main())
