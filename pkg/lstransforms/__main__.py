import sys

from lstransforms.main import main

sys.exit(main())
