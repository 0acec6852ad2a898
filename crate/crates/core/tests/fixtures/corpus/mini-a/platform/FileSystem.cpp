#include "FileSystem.h"
#include "Log.h"
