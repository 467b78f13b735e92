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

# Process exit codes

EXIT_OK      = 0
EXIT_FAILURE = 1
EXIT_USAGE   = 2
EXIT_DATA    = 3
EXIT_NUMERIC = 4

#===============================================================================

class MidFeaError(Exception):
    exit_code = EXIT_FAILURE

#===============================================================================

class InvalidArgumentError(MidFeaError, ValueError):
    exit_code = EXIT_DATA

class UsageError(MidFeaError):
    exit_code = EXIT_USAGE

class ConfigError(MidFeaError, ValueError):
    exit_code = EXIT_DATA

#===============================================================================

class DataError(MidFeaError):
    exit_code = EXIT_DATA

class MissingArtifactError(DataError):
    def __init__(self, path, what=None):
        self.path = str(path)
        if what is None:
            super().__init__('Missing file: {}'.format(path))
        else:
            super().__init__('Missing {} file: {} (run the command that creates it first)'
                             .format(what, path))

#===============================================================================

class ParseError(MidFeaError, ValueError):
    exit_code = EXIT_DATA

class MalformedHeaderError(ParseError):
    pass

class TruncatedPayloadError(ParseError):
    pass

class ExcessPayloadError(ParseError):
    pass

class DimensionOverflowError(ParseError):
    pass

class NonFinitePayloadError(ParseError):
    pass

class ImageDecodeError(ParseError):
    def __init__(self, path, msg):
        self.path = str(path)
        super().__init__('{}: {}'.format(path, msg))

#===============================================================================

class NumericFailure(MidFeaError, ArithmeticError):
    exit_code = EXIT_NUMERIC

#===============================================================================
