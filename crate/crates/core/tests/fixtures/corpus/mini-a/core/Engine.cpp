#include "Engine.h"
#include "core/Log.h"
#include "Memory.h"
// #include "Legacy.h"
