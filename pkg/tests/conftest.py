import sys

# head reduction can build deeply right-nested terms; the library is
# recursive, so give it room
sys.setrecursionlimit(50000)
