# Management package

