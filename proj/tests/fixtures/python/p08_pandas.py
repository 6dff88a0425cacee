import pandas as pd


def task_func(df, column):
    if column not in df.columns:
        raise KeyError(column)
    grouped = df.groupby(column).size().reset_index(name="count")
    return grouped.sort_values("count", ascending=False)
