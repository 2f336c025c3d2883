import sys

from bessel_linz.cli import main

sys.exit(main())
