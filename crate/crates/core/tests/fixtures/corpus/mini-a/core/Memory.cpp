#include "Memory.h"
#include "platform/Platform.h"
