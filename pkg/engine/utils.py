import hashlib
import json


def underscored_to_dashed(name):
    """
    e.g. delta_search_tol => delta-search-tol
    """
    return name.replace("_", "-")


def params_digest(command, params, length=10):
    """stable md5 over the command id and its parameters, used to name run directories"""
    payload = json.dumps({"command": command, "params": params}, sort_keys=True, default=str)
    hash_md5 = hashlib.md5()
    hash_md5.update(payload.encode("utf-8"))
    return hash_md5.hexdigest()[:length]
