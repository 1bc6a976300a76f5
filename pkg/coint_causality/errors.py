# This file is part of coint_causality.
# Copyright (c) 2023, coint_causality developers.
# SPDX-License-Identifier: BSD-2-Clause

""" Exception hierarchy. Validation errors map to CLI exit code 1, computation errors to 2. """


class Coint_Error(Exception):
    exit_code = 2


class Validation_Error(Coint_Error):
    exit_code = 1


class Computation_Error(Coint_Error):
    exit_code = 2


# --- validation

class Parameter_Error(Validation_Error):
    pass


class Alignment_Error(Validation_Error):
    pass


class Domain_Error(Validation_Error):
    def __init__(self, message, year=None):
        super().__init__(message)
        self.year = year


class Invalid_Restriction_Error(Validation_Error):
    pass


class Schema_Error(Validation_Error):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class Continuity_Error(Validation_Error):
    pass


class Parse_Error(Validation_Error):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class Config_Error(Validation_Error):
    pass


# --- computation

class Insufficient_Data_Error(Computation_Error):
    pass


class Degrees_Of_Freedom_Error(Computation_Error):
    pass


class Singular_Matrix_Error(Computation_Error):
    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class Degenerate_Input_Error(Computation_Error):
    pass


class Empty_Result_Error(Computation_Error):
    pass


class Normalization_Error(Computation_Error):
    pass


class Output_Error(Computation_Error):
    pass
