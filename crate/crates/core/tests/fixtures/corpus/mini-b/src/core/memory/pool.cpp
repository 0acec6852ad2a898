#include "pool.h"
#include "..\..\core\log.h"
