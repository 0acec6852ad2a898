#include "Entity.h"
#include "Log.h"
