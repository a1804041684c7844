import sys

from semimatch.cli import main

sys.exit(main())
