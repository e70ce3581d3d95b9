import sys
from boxstab.cli import main

sys.exit(main())
