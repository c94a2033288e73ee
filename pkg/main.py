#!/usr/bin/env python3

from proper_subspaces.run import main

if __name__ == "__main__":
    import sys

    sys.exit(main())
