"""
Loading and normalising a country series
========================================

Read a bundled CSV, inspect it, correct for the adult share and rebase
to the start year of the transition.
"""

import io

from transecon import datasets
from transecon.errors import ValidationError
from transecon.series import correct_for_adult_share, load_series, mean_growth, normalize_to_base_year

# bundled series share one layout: year,gdp_pc[,pop_total,pop_15plus]
usa = datasets.load("USA")
print(f"USA: {usa.years[0]}-{usa.years[-1]}, {len(usa.years)} rows, population columns: {usa.has_population}")
print(f"mean growth 1950-2000: {mean_growth(usa, 1950, 2000):.4f}")

# per-capita output measured against working-age people instead
adult = correct_for_adult_share(usa)
print(f"1930 per adult {adult.value_at(1930):.0f} vs per capita {usa.value_at(1930):.0f}")

# transition countries are compared relative to their first year
rus = normalize_to_base_year(datasets.load("RUS"), 1991)
for year, value in zip(rus.years[:6], rus.values[:6]):
    print(f"  {year}  {value:.3f}")

# a missing year is rejected with the offending line number
try:
    load_series(io.StringIO("year,gdp_pc\n1990,100\n1992,110\n"), "BAD")
except ValidationError as err:
    print("rejected:", err)
