import sys

from schema_forge.cli import main

sys.exit(main())
