#===============================================================================
#
#  MidFea mid-level feature learning tools
#
#  Copyright (c) 2021  MidFea developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
#===============================================================================

import pathlib

#===============================================================================

# Export from module

from .logging import ProgressBar, configure_logging, log

#===============================================================================

from midfea.exceptions import MissingArtifactError

#===============================================================================

def ensure_directory(path):
#==========================
    path = pathlib.Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path

def required_file(path, what=None):
#==================================
    path = pathlib.Path(path)
    if not path.is_file():
        raise MissingArtifactError(path, what)
    return path

#===============================================================================

def read_key_values(path):
#=========================
    """
    Read a ``key=value`` text file into a dictionary of strings.
    """
    values = {}
    with open(path, 'r') as fp:
        for line in fp.read().splitlines():
            line = line.split('#', 1)[0].strip()
            if line:
                key, _, value = line.partition('=')
                values[key.strip()] = value.strip()
    return values

def write_key_values(path, values):
#==================================
    with open(path, 'w') as fp:
        for key in sorted(values):
            fp.write('{}={}\n'.format(key, values[key]))

#===============================================================================
