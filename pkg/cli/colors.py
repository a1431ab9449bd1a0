SUCCESS = "green"
ERROR = "red"
WARNING = "yellow"

PASS = SUCCESS
FAIL = ERROR
