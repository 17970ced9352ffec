/*
 * Copyright 2026 The vaxclust Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vaxclust/fixtures.h"

#include <fmt/format.h>

#include <algorithm>

#include "vaxclust/csv.h"
#include "vaxclust/error.h"

namespace vaxclust {
namespace {

// Year, k, cluster, then the 14 rates in column order, as printed.
constexpr PublishedMeansRow kPublishedMeans[] = {
    {2021, 2, "L",
     {"69.9", "89.2", "85.2", "86.3", "78.8", "84.6", "84.8",
      "76.8", "79.0", "87.1", "72.6", "87.6", "79.4", "82.9"}},
    {2021, 2, "H",
     {"87.3", "95.5", "93.4", "94.5", "91.3", "93.3", "93.1",
      "90.4", "91.5", "94.8", "88.51", "95.2", "91.7", "91.5"}},
    {2021, 3, "L",
     {"69.9", "89.3", "85.2", "86.3", "78.8", "84.6", "84.8",
      "76.8", "79.0", "87.1", "72.6", "87.7", "79.4", "82.9"}},
    {2021, 3, "M",
     {"81.8", "93.6", "90.8", "92.0", "87.1", "90.3", "90.3",
      "85.7", "87.3", "92.6", "83.2", "93.2", "87.8", "88.5"}},
    {2021, 3, "H",
     {"89.5", "96.3", "94.4", "95.5", "93.0", "94.5", "94.3",
      "92.4", "93.2", "95.7", "90.7", "96.0", "93.3", "92.8"}},
    {2021, 6, "Ls",
     {"56.1", "82.4", "64.0", "70.6", "61.6", "78.2", "64.5",
      "60.2", "65.4", "83.5", "58.9", "70.9", "64.3", "61.7"}},
    {2021, 6, "VL",
     {"66.6", "88.7", "84.4", "85.0", "76.3", "83.1", "83.8",
      "74.3", "76.6", "85.8", "68.5", "87.2", "77.0", "82.4"}},
    {2021, 6, "L",
     {"73.4", "90.2", "87.3", "88.5", "81.9", "86.2", "86.9",
      "79.8", "81.8", "88.3", "76.9", "89.1", "82.3", "84.8"}},
    {2021, 6, "M",
     {"81.8", "93.6", "90.8", "92.0", "87.1", "90.3", "90.3",
      "85.7", "87.3", "92.6", "83.2", "93.2", "87.8", "88.5"}},
    {2021, 6, "H",
     {"88.4", "95.9", "93.6", "94.9", "91.9", "93.8", "93.4",
      "91.2", "92.1", "95.2", "89.5", "95.4", "92.2", "91.8"}},
    {2021, 6, "Hst",
     {"91.5", "97.1", "95.9", "96.6", "94.9", "95.6", "95.7",
      "94.4", "95.0", "96.6", "92.6", "97.0", "95.2", "94.5"}},
    {2022, 2, "L",
     {"68.8", "87.4", "85.9", "86.2", "79.0", "82.4", "84.5",
      "77.4", "80.2", "85.4", "70.2", "87.9", "79.3", "82.1"}},
    {2022, 2, "H",
     {"85.6", "94.1", "92.9", "93.7", "90.4", "91.7", "92.2",
      "89.3", "90.9", "93.7", "86.8", "94.7", "90.1", "89.9"}},
    {2022, 3, "L",
     {"68.8", "87.4", "85.9", "86.2", "79.0", "82.4", "84.5",
      "77.4", "80.2", "85.4", "70.2", "87.9", "79.3", "82.1"}},
    {2022, 3, "M",
     {"81.3", "92.0", "90.9", "91.6", "87.3", "88.9", "89.8",
      "85.6", "88.0", "91.5", "82.7", "93.0", "86.5", "87.2"}},
    {2022, 3, "H",
     {"88.8", "95.6", "94.4", "95.3", "92.7", "93.7", "93.9",
      "92.1", "93.0", "95.2", "89.8", "95.9", "92.8", "91.8"}},
    {2022, 6, "Ls",
     {"62.2", "81.1", "67.8", "77.7", "66.7", "74.6", "68.5",
      "64.0", "69.5", "80.2", "62.7", "75.0", "68.3", "64.9"}},
    {2022, 6, "VL",
     {"66.4", "84.8", "84.1", "86.2", "77.8", "79.0", "83.3",
      "75.8", "78.2", "81.9", "66.2", "87.0", "77.3", "81.6"}},
    {2022, 6, "L",
     {"73.2", "87.6", "87.3", "88.2", "81.8", "83.1", "86.3",
      "80.1", "82.2", "86.4", "74.3", "88.9", "80.9", "83.6"}},
    {2022, 6, "M",
     {"78.9", "91.2", "88.9", "90.6", "85.5", "87.5", "88.1",
      "83.7", "86.1", "90.2", "80.5", "91.6", "84.7", "85.6"}},
    {2022, 6, "H",
     {"83.7", "93.0", "91.9", "92.9", "89.8", "89.5", "91.3",
      "88.2", "90.0", "92.5", "85.2", "94.0", "89.2", "89.1"}},
    {2022, 6, "Hst",
     {"88.7", "95.5", "94.6", "95.4", "93.0", "93.5", "94.2",
      "92.2", "93.2", "95.2", "89.7", "96.0", "92.8", "92.3"}},
    {2023, 2, "L",
     {"70.1", "86.2", "84.8", "86.8", "79.3", "81.1", "84.0",
      "77.5", "79.9", "84.4", "70.8", "87.2", "78.8", "81.5"}},
    {2023, 2, "H",
     {"85.2", "93.9", "92.6", "93.7", "90.5", "91.1", "92.1",
      "89.3", "90.8", "93.4", "86.5", "94.5", "90.1", "89.9"}},
    {2023, 3, "L",
     {"70.1", "86.2", "84.8", "86.8", "79.3", "81.1", "84.0",
      "77.5", "79.9", "84.4", "70.8", "87.3", "78.8", "81.5"}},
    {2023, 3, "M",
     {"81.4", "92.1", "90.5", "91.8", "87.7", "88.5", "89.7",
      "86.0", "88.1", "91.4", "82.9", "92.8", "87.0", "87.4"}},
    {2023, 3, "H",
     {"88.7", "95.5", "94.6", "95.4", "93.0", "93.5", "94.2",
      "92.2", "93.2", "95.2", "89.7", "96.0", "92.8", "92.3"}},
    {2023, 6, "Ls",
     {"56.1", "82.4", "64.0", "70.6", "61.6", "78.2", "64.5",
      "60.2", "65.4", "83.5", "58.9", "70.9", "64.3", "61.7"}},
    {2023, 6, "VL",
     {"66.6", "88.7", "84.4", "85.0", "76.3", "83.1", "83.8",
      "74.3", "76.6", "85.8", "68.5", "87.2", "77.0", "82.4"}},
    {2023, 6, "L",
     {"73.4", "90.2", "87.3", "88.5", "81.9", "86.2", "86.9",
      "79.8", "81.8", "88.3", "76.9", "89.1", "82.3", "84.8"}},
    {2023, 6, "M",
     {"81.8", "93.6", "90.8", "92.0", "87.1", "90.3", "90.3",
      "85.7", "87.3", "92.6", "83.2", "93.2", "87.8", "88.5"}},
    {2023, 6, "H",
     {"88.4", "95.9", "93.6", "94.9", "91.9", "93.8", "93.4",
      "91.2", "92.1", "95.2", "89.5", "95.4", "92.2", "91.8"}},
    {2023, 6, "Hst",
     {"91.5", "97.1", "95.9", "96.6", "94.9", "95.6", "95.7",
      "94.4", "95.0", "96.6", "92.6", "97.0", "95.2", "94.5"}},
};

constexpr DistrictAlias kAliases[] = {
    {"Bristol, City of", "Bristol"},
    {"Herefordshire, County of", "Herefordshire"},
    {"Kingston upon Hull, City of", "Kingston upon Hull"},
    {"St. Helens", "St Helens"},
};

constexpr FixtureDistrict kDistricts[] = {
    {"Barking and Dagenham", 1},
    {"Barnet", 1},
    {"Barnsley", 1},
    {"Bath and North East Somerset", 4},
    {"Bedford", 3},
    {"Bexley", 1},
    {"Birmingham", 1},
    {"Blackburn with Darwen", 3},
    {"Blackpool", 3},
    {"Bolton", 1},
    {"Bournemouth, Christchurch and Poole", 3},
    {"Bracknell Forest", 3},
    {"Bradford", 1},
    {"Brent", 1},
    {"Brighton and Hove", 2},
    {"Bristol", 2},
    {"Bromley", 1},
    {"Buckinghamshire", 4},
    {"Bury", 1},
    {"Calderdale", 1},
    {"Cambridgeshire", 1},
    {"Camden", 1},
    {"Central Bedfordshire", 4},
    {"Cheshire East", 4},
    {"Cheshire West and Chester", 4},
    {"Cornwall", 6},
    {"County Durham", 5},
    {"Coventry", 1},
    {"Croydon", 1},
    {"Cumbria", 6},
    {"Darlington", 3},
    {"Derby", 2},
    {"Derbyshire", 4},
    {"Devon", 5},
    {"Doncaster", 1},
    {"Dorset", 5},
    {"Dudley", 1},
    {"Ealing", 1},
    {"East Riding of Yorkshire", 5},
    {"East Sussex", 4},
    {"Enfield", 1},
    {"Essex", 4},
    {"Gateshead", 1},
    {"Gloucestershire", 4},
    {"Greenwich", 1},
    {"Hackney", 1},
    {"Halton", 3},
    {"Hammersmith and Fulham", 1},
    {"Hampshire", 4},
    {"Haringey", 1},
    {"Harrow", 1},
    {"Hartlepool", 3},
    {"Havering", 1},
    {"Herefordshire", 6},
    {"Hertfordshire", 4},
    {"Hillingdon", 1},
    {"Hounslow", 1},
    {"Isle of Wight", 4},
    {"Islington", 1},
    {"Kensington and Chelsea", 1},
    {"Kent", 4},
    {"Kingston upon Hull", 2},
    {"Kingston upon Thames", 1},
    {"Kirklees", 1},
    {"Knowsley", 1},
    {"Lambeth", 1},
    {"Lancashire", 4},
    {"Leeds", 1},
    {"Leicester", 2},
    {"Leicestershire", 4},
    {"Lewisham", 1},
    {"Lincolnshire", 5},
    {"Liverpool", 1},
    {"Luton", 1},
    {"Manchester", 1},
    {"Medway", 3},
    {"Merton", 1},
    {"Middlesbrough", 3},
    {"Milton Keynes", 3},
    {"Newcastle upon Tyne", 1},
    {"Newham", 1},
    {"Norfolk", 5},
    {"North East Lincolnshire", 3},
    {"North Lincolnshire", 4},
    {"North Northamptonshire", 4},
    {"North Somerset", 4},
    {"North Tyneside", 1},
    {"North Yorkshire", 6},
    {"Northumberland", 6},
    {"Nottingham", 2},
    {"Nottinghamshire", 4},
    {"Oldham", 1},
    {"Oxfordshire", 4},
    {"Peterborough", 3},
    {"Plymouth", 2},
    {"Portsmouth", 2},
    {"Reading", 3},
    {"Redbridge", 1},
    {"Redcar and Cleveland", 3},
    {"Richmond upon Thames", 1},
    {"Rochdale", 1},
    {"Rotherham", 1},
    {"Rutland", 6},
    {"Salford", 1},
    {"Sandwell", 1},
    {"Sefton", 1},
    {"Sheffield", 1},
    {"Shropshire", 6},
    {"Slough", 3},
    {"Solihull", 1},
    {"Somerset", 5},
    {"South Gloucestershire", 4},
    {"South Tyneside", 1},
    {"Southampton", 2},
    {"Southend-on-Sea", 3},
    {"Southwark", 1},
    {"St Helens", 1},
    {"Staffordshire", 4},
    {"Stockport", 1},
    {"Stockton-on-Tees", 3},
    {"Stoke-on-Trent", 2},
    {"Suffolk", 5},
    {"Sunderland", 1},
    {"Surrey", 4},
    {"Sutton", 1},
    {"Swindon", 3},
    {"Tameside", 1},
    {"Telford and Wrekin", 3},
    {"Thurrock", 3},
    {"Torbay", 3},
    {"Tower Hamlets", 1},
    {"Trafford", 1},
    {"Wakefield", 1},
    {"Walsall", 1},
    {"Waltham Forest", 1},
    {"Wandsworth", 1},
    {"Warrington", 3},
    {"Warwickshire", 4},
    {"West Berkshire", 4},
    {"West Northamptonshire", 4},
    {"West Sussex", 4},
    {"Westminster", 1},
    {"Wigan", 1},
    {"Wiltshire", 5},
    {"Windsor and Maidenhead", 3},
    {"Wirral", 1},
    {"Wokingham", 3},
    {"Wolverhampton", 1},
    {"Worcestershire", 4},
    {"York", 3},
};

constexpr std::string_view kLow2021[] = {
    "Nottingham", "Peterborough", "Manchester", "Liverpool", "Birmingham",
    "Barking and Dagenham", "Barnet", "Brent", "Camden", "Croydon", "Enfield",
    "Greenwich", "Hackney", "Hammersmith and Fulham", "Haringey", "Islington",
    "Kensington and Chelsea", "Lambeth", "Lewisham", "Merton", "Newham",
    "Redbridge", "Richmond upon Thames", "Southwark", "Tower Hamlets",
    "Waltham Forest", "Wandsworth", "Westminster",
};
constexpr std::string_view kHigh2021[] = {
    "Hartlepool", "Thurrock", "Bury", "Kirklees", "Nottinghamshire",
    "Middlesbrough", "Medway", "Oldham", "Leeds", "Oxfordshire",
    "Redcar and Cleveland", "Bracknell Forest", "Rochdale", "Wakefield",
    "Somerset", "Stockton-on-Tees", "West Berkshire", "Salford", "Gateshead",
    "Staffordshire", "Darlington", "Reading", "Stockport", "Bexley", "Suffolk",
    "Halton", "Slough", "Tameside", "Bromley", "Surrey", "Warrington",
    "Windsor and Maidenhead", "Trafford", "Ealing", "Warwickshire",
    "Blackburn with Darwen", "Wokingham", "Wigan", "Harrow", "West Sussex",
    "Blackpool", "Milton Keynes", "Knowsley", "Havering", "Worcestershire",
    "Kingston upon Hull", "Brighton and Hove", "St Helens", "Hillingdon",
    "Rutland", "East Riding of Yorkshire", "Portsmouth", "Sefton", "Hounslow",
    "North East Lincolnshire", "Southampton", "Wirral", "Kingston upon Thames",
    "North Lincolnshire", "Isle of Wight", "Barnsley", "Sutton", "York",
    "County Durham", "Doncaster", "Cambridgeshire", "Derby", "Cheshire East",
    "Rotherham", "Cumbria", "Leicester", "Cheshire West and Chester",
    "Sheffield", "Derbyshire", "Herefordshire", "Shropshire",
    "Newcastle upon Tyne", "Devon", "Telford and Wrekin", "Cornwall",
    "North Tyneside", "East Sussex", "Stoke-on-Trent", "Wiltshire",
    "South Tyneside", "Essex", "Bath and North East Somerset", "Bedford",
    "Sunderland", "Gloucestershire", "Bristol", "Central Bedfordshire",
    "Coventry", "Hampshire", "North Somerset", "Northumberland", "Dudley",
    "Hertfordshire", "South Gloucestershire",
    "Bournemouth, Christchurch and Poole", "Sandwell", "Kent", "Plymouth",
    "Dorset", "Solihull", "Lancashire", "Torbay", "Buckinghamshire", "Walsall",
    "Leicestershire", "Swindon", "North Northamptonshire", "Wolverhampton",
    "Lincolnshire", "Luton", "West Northamptonshire", "Bradford", "Norfolk",
    "Southend-on-Sea", "Bolton", "Calderdale", "North Yorkshire",
};
constexpr std::string_view kLow2022[] = {
    "Nottingham", "Peterborough", "Manchester", "Liverpool", "Birmingham",
    "Barking and Dagenham", "Barnet", "Brent", "Camden", "Croydon", "Enfield",
    "Hackney", "Hammersmith and Fulham", "Haringey", "Islington",
    "Kensington and Chelsea", "Lambeth", "Lewisham", "Merton", "Newham",
    "Redbridge", "Richmond upon Thames", "Tower Hamlets", "Waltham Forest",
    "Wandsworth", "Westminster",
};
constexpr std::string_view kHigh2022[] = {
    "Hartlepool", "Luton", "Buckinghamshire", "Sandwell", "Gloucestershire",
    "Middlesbrough", "Southend-on-Sea", "North Northamptonshire", "Solihull",
    "Hampshire", "Redcar and Cleveland", "Thurrock", "West Northamptonshire",
    "Walsall", "Hertfordshire", "Stockton-on-Tees", "Medway", "Bolton",
    "Wolverhampton", "Kent", "Darlington", "Bracknell Forest", "Bury",
    "Bradford", "Lancashire", "Halton", "West Berkshire", "Oldham",
    "Calderdale", "Leicestershire", "Warrington", "Reading", "Rochdale",
    "Kirklees", "Lincolnshire", "Blackburn with Darwen", "Slough", "Salford",
    "Leeds", "Norfolk", "Blackpool", "Windsor and Maidenhead", "Stockport",
    "Wakefield", "North Yorkshire", "Kingston upon Hull, City of", "Wokingham",
    "Tameside", "Gateshead", "Nottinghamshire", "East Riding of Yorkshire",
    "Milton Keynes", "Trafford", "Bexley", "Oxfordshire",
    "North East Lincolnshire", "Brighton and Hove", "Wigan", "Bromley",
    "Somerset", "North Lincolnshire", "Portsmouth", "Knowsley", "Ealing",
    "Staffordshire", "York", "Southampton", "St. Helens", "Greenwich",
    "Suffolk", "Derby", "Isle of Wight", "Sefton", "Harrow", "Surrey",
    "Leicester", "County Durham", "Wirral", "Havering", "Warwickshire",
    "Herefordshire, County of", "Cheshire East", "Barnsley", "Hillingdon",
    "West Sussex", "Telford and Wrekin", "Cheshire West and Chester",
    "Doncaster", "Hounslow", "Worcestershire", "Stoke-on-Trent", "Shropshire",
    "Rotherham", "Kingston upon Thames", "Rutland",
    "Bath and North East Somerset", "Cornwall", "Sheffield", "Sutton",
    "Bristol, City of", "Wiltshire", "Newcastle upon Tyne", "Cambridgeshire",
    "North Somerset", "Bedford", "North Tyneside", "Cumbria",
    "South Gloucestershire", "Central Bedfordshire", "South Tyneside",
    "Derbyshire", "Plymouth", "Northumberland", "Sunderland", "Devon",
    "Torbay", "Bournemouth, Christchurch and Poole", "Coventry", "East Sussex",
    "Swindon", "Dorset", "Dudley", "Essex",
};
constexpr std::string_view kLow2023[] = {
    "Nottingham", "Peterborough", "Luton", "Rochdale", "Sefton", "Dudley",
    "Bexley", "Brent", "Camden", "Ealing", "Enfield", "Hackney", "Haringey",
    "Harrow", "Havering", "Hillingdon", "Kensington and Chelsea",
    "Kingston upon Thames", "Lambeth", "Redbridge", "Richmond upon Thames",
    "Southwark", "Sutton", "Wandsworth", "Westminster", "Cambridgeshire",
    "Cumbria",
};
constexpr std::string_view kHigh2023[] = {
    "Hartlepool", "Thurrock", "Bolton", "Bradford", "Lancashire",
    "Middlesbrough", "Medway", "Bury", "Calderdale", "Leicestershire",
    "Redcar and Cleveland", "Bracknell Forest", "Manchester", "Kirklees",
    "Lincolnshire", "Stockton-on-Tees", "West Berkshire", "Oldham", "Leeds",
    "Norfolk", "Darlington", "Reading", "Salford", "Wakefield",
    "North Yorkshire", "Halton", "Slough", "Stockport", "Gateshead",
    "Nottinghamshire", "Warrington", "Windsor and Maidenhead", "Tameside",
    "Barking and Dagenham", "Oxfordshire", "Blackburn with Darwen",
    "Wokingham", "Trafford", "Barnet", "Somerset", "Blackpool",
    "Milton Keynes", "Wigan", "Bromley", "Staffordshire", "Kingston upon Hull",
    "Brighton and Hove", "Knowsley", "Croydon", "Suffolk",
    "East Riding of Yorkshire", "Portsmouth", "Liverpool", "Greenwich",
    "Surrey", "North East Lincolnshire", "Southampton", "St Helens",
    "Hammersmith and Fulham", "Warwickshire", "North Lincolnshire",
    "Isle of Wight", "Wirral", "Hounslow", "West Sussex", "York",
    "County Durham", "Barnsley", "Islington", "Worcestershire", "Derby",
    "Cheshire East", "Doncaster", "Lewisham", "Rutland", "Leicester",
    "Cheshire West and Chester", "Rotherham", "Merton", "Herefordshire",
    "Shropshire", "Sheffield", "Newham", "Telford and Wrekin", "Cornwall",
    "Newcastle upon Tyne", "Tower Hamlets", "Stoke-on-Trent", "Wiltshire",
    "North Tyneside", "Waltham Forest", "Bath and North East Somerset",
    "Bedford", "South Tyneside", "Derbyshire", "Bristol",
    "Central Bedfordshire", "Sunderland", "Devon", "North Somerset",
    "Northumberland", "Birmingham", "East Sussex", "South Gloucestershire",
    "Bournemouth, Christchurch and Poole", "Coventry", "Essex", "Plymouth",
    "Dorset", "Sandwell", "Gloucestershire", "Torbay", "Buckinghamshire",
    "Solihull", "Hampshire", "Swindon", "North Northamptonshire", "Walsall",
    "Hertfordshire", "Southend-on-Sea", "West Northamptonshire",
    "Wolverhampton", "Kent",
};

}  // namespace

VaccinationProfile PublishedMeansRow::Profile() const {
  VaccinationProfile profile;
  for (std::size_t v = 0; v < kNumVaccines; ++v) {
    profile.rates[v] = *csv::ParseDecimal(rates[v]);
  }
  return profile;
}

std::span<const PublishedMeansRow> PublishedMeans() { return kPublishedMeans; }

std::vector<PublishedMeansRow> PublishedMeansBlock(int year, int k) {
  std::vector<PublishedMeansRow> rows;
  for (const PublishedMeansRow& row : kPublishedMeans) {
    if (row.year == year && row.k == k) rows.push_back(row);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kSpecInvalid,
                fmt::format("no published means for {} with k = {}", year, k));
  }
  return rows;
}

std::span<const FixtureDistrict> FixtureDistricts() { return kDistricts; }

std::string_view CanonicalDistrictName(std::string_view name) {
  for (const DistrictAlias& alias : kAliases) {
    if (alias.alias == name) return alias.canonical;
  }
  return name;
}

namespace {

const FixtureDistrict* FindDistrict(std::string_view name) {
  const std::string_view canonical = CanonicalDistrictName(name);
  const auto it = std::lower_bound(
      std::begin(kDistricts), std::end(kDistricts), canonical,
      [](const FixtureDistrict& d, std::string_view n) { return d.name < n; });
  if (it == std::end(kDistricts) || it->name != canonical) {
    throw Error(ErrorCode::kSpecInvalid,
                fmt::format("unknown fixture district '{}'", name));
  }
  return it;
}

}  // namespace

int FixtureRurality(std::string_view name) {
  return FindDistrict(name)->rurality;
}

std::string FixtureDistrictId(std::string_view name) {
  const auto index = FindDistrict(name) - std::begin(kDistricts);
  return fmt::format("U{:03d}", index + 1);
}

TwoClusterList TwoClusterLists(int year) {
  switch (year) {
    case 2021: return {2021, kLow2021, kHigh2021};
    case 2022: return {2022, kLow2022, kHigh2022};
    case 2023: return {2023, kLow2023, kHigh2023};
    default:
      throw Error(ErrorCode::kSpecInvalid,
                  fmt::format("no two-cluster list for {}", year));
  }
}

FixtureYear LoadTwoClusterFixture(int year) {
  const TwoClusterList lists = TwoClusterLists(year);
  const std::vector<PublishedMeansRow> means = PublishedMeansBlock(year, 2);
  struct Entry {
    std::string id;
    std::string name;
    int label;
  };
  std::vector<Entry> entries;
  for (int label = 0; label < 2; ++label) {
    for (std::string_view name : label == 0 ? lists.low : lists.high) {
      entries.push_back({FixtureDistrictId(name), std::string(name), label});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.id < b.id; });

  FixtureYear out;
  out.dataset.year = YearKey{year};
  out.assignment.k = 2;
  out.assignment.names = CoverageVocabulary(2);
  for (const Entry& e : entries) {
    DistrictRow row;
    row.id = e.id;
    row.name = e.name;
    row.vaccination = means[e.label].Profile();
    row.gdsc.rurality = FixtureRurality(e.name);
    out.dataset.rows.push_back(std::move(row));
    out.assignment.labels.push_back(e.label);
  }
  return out;
}

}  // namespace vaxclust
