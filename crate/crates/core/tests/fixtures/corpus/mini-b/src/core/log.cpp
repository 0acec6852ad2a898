#include "log.h"
#include <cstdio>
