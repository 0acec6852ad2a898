#include "widget.h"
#include "button.h"
