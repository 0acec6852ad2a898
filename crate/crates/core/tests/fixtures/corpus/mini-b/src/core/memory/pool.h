#pragma once
#include <lumen/types.h>
