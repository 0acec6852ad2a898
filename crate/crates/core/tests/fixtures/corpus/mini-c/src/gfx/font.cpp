#include "font.h"
#include "ui/widget.h"
