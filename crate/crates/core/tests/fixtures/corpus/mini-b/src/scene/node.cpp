#include "node.h"
#include "util.h"
