#include "platform.h"
#include <windows.h>
